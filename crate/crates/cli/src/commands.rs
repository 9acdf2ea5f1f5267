use std::fmt::Write as _;

use serde::Serialize;

use oresme_core::algebra::rational::{format_rational, parse_rational};
use oresme_core::analytic::{product_reconstruct, ratio_limit_probe};
use oresme_core::bench::{evaluate, run_bench, Strategy};
use oresme_core::dsl::{check_ast_with, expectation_for, load_corpus, CorpusError};
use oresme_core::identities::{
    catalog, check_identity, kores_numeric_check, lookup, parse_range, run_catalog, IdentityReport, Profile, Sweep,
    BINET_ID,
};
use oresme_core::seq::{Provenance, SequenceTable};
use oresme_core::Rational;

use crate::render::{float, opt_float, Output};
use crate::{BenchArgs, DslCheckArgs, EvalArgs, Failure, LimitArgs, RootsArgs, TableArgs, VerifyArgs};

type CmdResult = Result<Output, Failure>;

fn rational_arg(name: &str, s: &str) -> Result<Rational, Failure> {
    parse_rational(s).map_err(|e| Failure::Usage(format!("--{name} `{s}`: {e}")))
}

fn ranges_arg(specs: &[String]) -> Result<Sweep, Failure> {
    let mut sweep = Sweep::default();
    for s in specs {
        let r = parse_range(s).map_err(|e| Failure::Usage(format!("--range `{s}`: {e}")))?;
        if sweep.range(&r.name).is_some() {
            return Err(Failure::Usage(format!("--range given twice for `{}`", r.name)));
        }
        sweep = sweep.with_range(r);
    }
    Ok(sweep)
}

#[derive(Serialize)]
struct TableRow {
    index: i64,
    poly: String,
    value: Option<String>,
}

#[derive(Serialize)]
struct TableOut {
    provenance: Provenance,
    derivative: bool,
    x: Option<String>,
    rows: Vec<TableRow>,
}

pub fn table(a: &TableArgs) -> CmdResult {
    if a.from > a.to {
        return Err(Failure::Usage(format!("--from {} exceeds --to {}", a.from, a.to)));
    }
    let x = a.x.as_deref().map(|s| rational_arg("x", s)).transpose()?;
    let t = SequenceTable::build(a.from, a.to, a.provenance.into(), a.derivative);
    let mut rows = Vec::new();
    for e in &t.entries {
        let value = match &x {
            Some(x) => Some(
                e.poly
                    .eval_exact(x)
                    .map(|v| format_rational(&v))
                    .map_err(|err| Failure::Usage(format!("--x {}: {err}", format_rational(x))))?,
            ),
            None => None,
        };
        rows.push(TableRow {
            index: e.index,
            poly: e.poly.to_fraction_string(),
            value,
        });
    }
    let mark = if a.derivative { "'" } else { "" };
    let mut pretty = String::new();
    for r in &rows {
        let _ = write!(pretty, "O{mark}_{} = {}", r.index, r.poly);
        if let (Some(v), Some(x)) = (&r.value, &x) {
            let _ = write!(pretty, "    [x = {}: {v}]", format_rational(x));
        }
        pretty.push('\n');
    }
    let csv = rows
        .iter()
        .map(|r| vec![r.index.to_string(), r.poly.clone(), r.value.clone().unwrap_or_default()])
        .collect();
    let out = TableOut {
        provenance: t.provenance,
        derivative: t.derivative,
        x: x.as_ref().map(format_rational),
        rows,
    };
    Ok(Output::new(&out, vec!["index", "poly", "value"], csv, pretty))
}

#[derive(Serialize)]
struct EvalOut {
    n: i64,
    x: String,
    mode: String,
    value: String,
    digest: String,
}

pub fn eval(a: &EvalArgs) -> CmdResult {
    let x = rational_arg("x", &a.x)?;
    let v = evaluate(a.mode, a.n, &x).map_err(|e| Failure::Usage(e.to_string()))?;
    let out = EvalOut {
        n: a.n,
        x: format_rational(&x),
        mode: a.mode.to_string(),
        value: v.to_string(),
        digest: v.digest(),
    };
    let pretty = format!("O_{}({}) = {}    [{} sha256 {}]\n", out.n, out.x, out.value, out.mode, out.digest);
    let row = vec![out.n.to_string(), out.x.clone(), out.mode.clone(), out.value.clone(), out.digest.clone()];
    Ok(Output::new(&out, vec!["n", "x", "mode", "value", "digest"], vec![row], pretty))
}

#[derive(Serialize)]
struct ReportOut<'a> {
    #[serde(flatten)]
    report: &'a IdentityReport,
    outcome: String,
}

#[derive(Serialize)]
struct ReportsOut<'a> {
    ok: bool,
    reports: Vec<ReportOut<'a>>,
}

const REPORT_HEADER: [&str; 9] = [
    "id", "sweep", "verdict", "expected", "outcome", "vacuous", "checked", "failures", "witnesses",
];

fn label<T: Serialize>(v: &T) -> String {
    serde_json::to_value(v)
        .ok()
        .and_then(|v| v.as_str().map(str::to_string))
        .unwrap_or_default()
}

/// Witness parameter lists, `;`-separated, each as `name=value` pairs.
fn witness_params(r: &IdentityReport) -> String {
    r.witnesses
        .iter()
        .map(|w| w.params.0.iter().map(|(n, v)| format!("{n}={v}")).collect::<Vec<_>>().join(" "))
        .collect::<Vec<_>>()
        .join(";")
}

fn reports_output(reports: &[IdentityReport]) -> Output {
    let ok = reports.iter().all(|r| !r.unexpected);
    let rows = reports
        .iter()
        .map(|r| {
            vec![
                r.id.clone(),
                r.sweep.clone(),
                label(&r.verdict),
                label(&r.expected),
                r.outcome(),
                r.vacuous.to_string(),
                r.checked.to_string(),
                r.failures.to_string(),
                witness_params(r),
            ]
        })
        .collect();
    let width = reports.iter().map(|r| r.id.len()).max().unwrap_or(0);
    let mut pretty = String::new();
    for r in reports {
        let _ = write!(
            pretty,
            "{:width$}  {:<20} {:>7} checked  {}",
            r.id,
            r.outcome(),
            r.checked,
            r.sweep
        );
        if !r.witnesses.is_empty() {
            let _ = write!(pretty, "  witnesses: {}", witness_params(r).replace(';', ", "));
        }
        pretty.push('\n');
    }
    let _ = writeln!(
        pretty,
        "{} of {} outcomes match expectations",
        reports.iter().filter(|r| !r.unexpected).count(),
        reports.len()
    );
    let out = ReportsOut {
        ok,
        reports: reports
            .iter()
            .map(|r| ReportOut {
                report: r,
                outcome: r.outcome(),
            })
            .collect(),
    };
    Output::new(&out, REPORT_HEADER.to_vec(), rows, pretty).with_exit(if ok { 0 } else { 1 })
}

pub fn verify(a: &VerifyArgs) -> CmdResult {
    let profile: Profile = a.profile.into();
    let Some(id) = &a.id else {
        return Ok(reports_output(&run_catalog(profile)));
    };
    let overrides = ranges_arg(&a.range)?;
    let usage = |e: oresme_core::identities::IdentityError| Failure::Usage(e.to_string());
    let report = match &a.at {
        Some(k) => {
            let k = rational_arg("at", k)?;
            let mut sweep = if id == BINET_ID {
                Sweep::single("n", 1, 20)
            } else {
                lookup(id).map_err(usage)?.default_sweep(profile)
            };
            for r in overrides.ranges {
                sweep = sweep.with_range(r);
            }
            kores_numeric_check(id, &k, &sweep).map_err(usage)?
        }
        None => {
            let entry = lookup(id).map_err(|e| {
                let ids: Vec<&str> = catalog().iter().map(|e| e.id).collect();
                Failure::Usage(format!("{e}; known: {}", ids.join(", ")))
            })?;
            let mut sweep = entry.default_sweep(profile);
            for r in overrides.ranges {
                sweep = sweep.with_range(r);
            }
            check_identity(id, &sweep).map_err(usage)?
        }
    };
    Ok(reports_output(&[report]))
}

pub fn roots(a: &RootsArgs) -> CmdResult {
    if a.n < 1 {
        return Err(Failure::Usage("--n must be at least 1".into()));
    }
    if a.tol.is_nan() || a.tol <= 0.0 {
        return Err(Failure::Usage("--tol must be positive".into()));
    }
    let r = product_reconstruct(a.n, a.tol);
    let degree = r.reconstructed.len() as i64 - 1;
    let rows: Vec<Vec<String>> = r
        .reconstructed
        .iter()
        .zip(&r.exact)
        .enumerate()
        .map(|(i, (f, e))| vec![(degree - i as i64).to_string(), e.clone(), float(*f)])
        .collect();
    let mut pretty = format!(
        "x^{n} O_{n}(x) from {} cosine roots: max |error| = {}  tol = {}  {}\n",
        r.roots.len(),
        float(r.max_error),
        r.tol,
        if r.pass { "pass" } else { "FAIL" },
        n = r.n
    );
    for row in &rows {
        let _ = writeln!(pretty, "  x^{:<4} exact {:>12}  product {}", row[0], row[1], row[2]);
    }
    let exit = if r.pass { 0 } else { 1 };
    Ok(Output::new(&r, vec!["degree", "exact", "reconstructed"], rows, pretty).with_exit(exit))
}

pub fn limit(a: &LimitArgs) -> CmdResult {
    let t = ratio_limit_probe(a.x, a.steps).map_err(|e| Failure::Usage(format!("--x {}: {e}", a.x)))?;
    let rows = t
        .steps
        .iter()
        .map(|s| vec![s.n.to_string(), opt_float(s.ratio), opt_float(s.error)])
        .collect();
    let mut pretty = format!(
        "x = {}: {} after {} steps; limit {}, observed {}",
        a.x,
        label(&t.verdict),
        t.steps.len(),
        opt_float(t.limit),
        opt_float(t.observed_limit)
    );
    if let Some(b) = t.burn_in {
        let _ = write!(pretty, ", monotone error from n = {b}");
    }
    if t.remark_discrepancy {
        pretty.push_str("\nnote: the ratio tends to 1/2 here, not to magnitude 1");
    }
    pretty.push('\n');
    Ok(Output::new(&t, vec!["n", "ratio", "error"], rows, pretty))
}

pub fn bench(a: &BenchArgs) -> CmdResult {
    if a.modes.is_empty() {
        return Err(Failure::Usage("--modes is empty".into()));
    }
    let x = rational_arg("x", &a.x)?;
    if a.modes.contains(&Strategy::BinetFloat) && &x * &x <= Rational::from_integer(4.into()) {
        return Err(Failure::Usage(format!(
            "binet needs x^2 > 4 (got x = {}); drop it from --modes",
            format_rational(&x)
        )));
    }
    let r = run_bench(&a.modes, &a.n_list, &x, a.reps).map_err(|e| Failure::Usage(e.to_string()))?;
    let rows = r
        .records
        .iter()
        .map(|rec| {
            vec![
                rec.strategy.to_string(),
                rec.n.to_string(),
                rec.x.clone(),
                rec.reps.to_string(),
                rec.wall_ns.to_string(),
                rec.digest.clone(),
            ]
        })
        .collect();
    let mut pretty = String::new();
    for rec in &r.records {
        let short: String = rec.digest.chars().take(16).collect();
        let _ = writeln!(
            pretty,
            "{:<12} n={:<8} {:>12.3} us  {}",
            rec.strategy,
            rec.n,
            rec.wall_ns as f64 / 1e3,
            short
        );
    }
    let _ = writeln!(
        pretty,
        "exact digests {}",
        if r.consistent {
            "agree".to_string()
        } else {
            format!("DIFFER at n = {:?}", r.mismatches)
        }
    );
    let exit = if r.consistent { 0 } else { 1 };
    Ok(Output::new(&r, vec!["strategy", "n", "x", "reps", "wall_ns", "digest"], rows, pretty).with_exit(exit))
}

pub fn dsl_check(a: &DslCheckArgs) -> CmdResult {
    let overrides = ranges_arg(&a.range)?;
    let (entries, errors) = match load_corpus(&a.file) {
        Ok(entries) => (entries, Vec::new()),
        Err(CorpusError::Io(e)) => return Err(Failure::Usage(format!("{}: {e}", a.file.display()))),
        Err(CorpusError::Parse { errors, parsed }) => (parsed, errors),
    };
    let mut reports = Vec::with_capacity(entries.len());
    for e in &entries {
        let declared = e.ast.free_vars();
        let own = Sweep::new(
            overrides
                .ranges
                .iter()
                .filter(|r| declared.contains(&r.name.as_str()))
                .cloned()
                .collect(),
        );
        let report = check_ast_with(&e.name, &e.ast, &own, expectation_for(&e.name))
            .map_err(|err| Failure::Runtime(format!("{} (line {}): {err}", e.name, e.line)))?;
        reports.push(report);
    }
    let mut out = reports_output(&reports);
    if !errors.is_empty() {
        out.diagnostics = errors
            .iter()
            .map(|e| format!("{}:{}:{}: {} (at `{}`)", a.file.display(), e.line, e.column, e.message, e.token))
            .collect();
        out.exit = 2;
    }
    Ok(out)
}
