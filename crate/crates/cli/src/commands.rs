use derangement_core::exact::{parse_rational, to_f64, to_ratio_string, Scalar};
use derangement_core::identities::{
    certification_points, certify_with, verify_grid, Grid, IdentityId, Mutation,
};
use derangement_core::probability::{
    erlang_bridge_check, gamma_fn_check, ks_critical_1pct, ks_statistic, mean_and_stderr,
    normalization_check, sample_deg_gamma11, deg_gamma11_cdf, stirling_log_expansion_check,
    theorem11_check, DegGammaParams, MomentCheckResult,
};
use derangement_core::quadrature::QuadratureSpec;
use derangement_core::sequences::{SequenceTable, TableParams, TableValue};
use derangement_core::{Error, Result};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::args::{CertifyArgs, GammaArgs, GammaCheckKind, SampleArgs, TableArgs, VerifyArgs};
use crate::output::Report;

fn rational_list(items: &[String]) -> Result<Vec<Scalar>> {
    items.iter().map(|s| parse_rational(s)).collect()
}

fn ratio_strings(items: &[Scalar]) -> Vec<String> {
    items.iter().map(to_ratio_string).collect()
}

fn pool(jobs: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::OutOfRange(format!("thread pool: {e}")))
}

pub fn table(args: &TableArgs) -> Result<Report> {
    let params = TableParams {
        lambda: parse_rational(&args.lambda)?,
        x: args.x.as_deref().map(parse_rational).transpose()?,
        r: args.r,
        m: args.m,
        n_max: args.n_max,
    };
    let table = SequenceTable::build(args.sequence, &params)?;
    let mut results = Vec::new();
    let mut rows = Vec::new();
    for (n, value) in &table.values {
        let (json_value, text) = match value {
            TableValue::Scalar(v) => (json!(to_ratio_string(v)), to_ratio_string(v)),
            TableValue::Poly(p) => (json!(ratio_strings(p.coeffs())), p.to_string()),
        };
        results.push(json!({ "n": n, "value": json_value }));
        rows.push(vec![n.to_string(), text]);
    }
    Ok(Report {
        command: "table",
        params: json!({
            "sequence": table.name.name(),
            "lambda": to_ratio_string(&table.lambda),
            "x": table.x.as_ref().map(to_ratio_string),
            "r": table.r,
            "m": table.m,
            "n_max": args.n_max,
        }),
        results: Value::Array(results),
        csv_header: vec!["n", "value"],
        csv_rows: rows,
        ok: true,
    })
}

pub fn verify(args: &VerifyArgs, jobs: usize) -> Result<Report> {
    let ids = if args.identities.is_empty() {
        IdentityId::ALL.into_iter().collect()
    } else {
        args.identities.iter().copied().collect()
    };
    let grid = Grid {
        ids,
        n_max: args.n_max,
        lambdas: rational_list(&args.lambda)?,
        xs: rational_list(&args.x)?,
        r_max: args.r_max,
    };
    let mutation = if args.mutate { Mutation::FlipLastTerm } else { Mutation::None };
    let report = verify_grid(&grid, mutation, jobs)?;
    let rows = report
        .failures
        .iter()
        .map(|f| {
            vec![
                f.case.identity_id.name().to_string(),
                f.case.n.to_string(),
                to_ratio_string(&f.case.lambda),
                f.case.x.as_ref().map(to_ratio_string).unwrap_or_default(),
                f.case.r.map(|r| r.to_string()).unwrap_or_default(),
                to_ratio_string(&f.lhs),
                to_ratio_string(&f.rhs),
            ]
        })
        .collect();
    Ok(Report {
        command: "verify",
        params: json!({
            "identities": grid.ids.iter().map(|id| id.name()).collect::<Vec<_>>(),
            "n_max": grid.n_max,
            "lambda": ratio_strings(&grid.lambdas),
            "x": ratio_strings(&grid.xs),
            "r_max": grid.r_max,
            "mutate": args.mutate,
        }),
        results: json!({
            "passed": report.passed(),
            "cases_run": report.cases_run,
            "failures": report.failures,
        }),
        csv_header: vec!["identity_id", "n", "lambda", "x", "r", "lhs", "rhs"],
        csv_rows: rows,
        ok: report.passed(),
    })
}

pub fn certify(args: &CertifyArgs) -> Result<Report> {
    let points = |given: &[String]| -> Result<Vec<Scalar>> {
        if given.is_empty() {
            Ok(certification_points(args.n + 1))
        } else {
            rational_list(given)
        }
    };
    let lambdas = points(&args.lambda)?;
    let xs = if args.identity.uses_x() { points(&args.x)? } else { Vec::new() };
    let mutation = if args.mutate { Mutation::FlipLastTerm } else { Mutation::None };
    let certified = certify_with(args.identity, args.n, &lambdas, &xs, args.r, mutation)?;
    let id = args.identity.name();
    Ok(Report {
        command: "certify",
        params: json!({
            "identity": id,
            "n": args.n,
            "lambda": ratio_strings(&lambdas),
            "x": ratio_strings(&xs),
            "r": args.identity.uses_r().then_some(args.r),
            "mutate": args.mutate,
        }),
        results: json!({ "identity": id, "n": args.n, "certified": certified }),
        csv_header: vec!["identity_id", "n", "certified"],
        csv_rows: vec![vec![id.to_string(), args.n.to_string(), certified.to_string()]],
        ok: certified,
    })
}

const MOMENT_HEADER: [&str; 8] =
    ["label", "numeric_value", "exact_target", "abs_error", "rel_error", "tolerance", "passed", "note"];

/// Shortest round-trip form, matching the JSON output.
fn float(v: f64) -> String {
    serde_json::to_string(&v).expect("f64 serializes")
}

fn moment_row(label: String, r: &MomentCheckResult, note: String) -> Vec<String> {
    vec![
        label,
        float(r.numeric_value),
        to_ratio_string(&r.exact_target),
        float(r.abs_error),
        float(r.rel_error),
        float(r.tolerance),
        r.passed.to_string(),
        note,
    ]
}

pub fn gamma_check(args: &GammaArgs, jobs: usize) -> Result<Report> {
    let lambda = parse_rational(&args.lambda)?;
    let spec = QuadratureSpec::default();
    let lambda_s = to_ratio_string(&lambda);
    let (params, results, header, rows, ok): (Value, Value, Vec<&'static str>, Vec<Vec<String>>, bool) = match args.check {
        GammaCheckKind::Thm11 => {
            let checks = pool(jobs)?.install(|| {
                (0..=args.n_max)
                    .into_par_iter()
                    .map(|n| theorem11_check(n, &lambda, &spec))
                    .collect::<Result<Vec<_>>>()
            })?;
            let rows = checks.iter().enumerate().map(|(n, r)| moment_row(format!("n={n}"), r, String::new())).collect();
            let ok = checks.iter().all(|r| r.passed);
            let results = checks.iter().enumerate().map(|(n, r)| json!({ "n": n, "check": r })).collect();
            (json!({ "lambda": lambda_s, "n_max": args.n_max }), Value::Array(results), MOMENT_HEADER.to_vec(), rows, ok)
        }
        GammaCheckKind::Gammafn => {
            let r = gamma_fn_check(args.k, &lambda, &spec)?;
            let rows = vec![moment_row(format!("k={}", args.k), &r, String::new())];
            (json!({ "lambda": lambda_s, "k": args.k }), json!([r]), MOMENT_HEADER.to_vec(), rows, r.passed)
        }
        GammaCheckKind::Normalization => {
            let p = DegGammaParams::new(args.alpha, args.beta, to_f64(&lambda))?;
            let r = normalization_check(&p, &spec)?;
            let label = format!("alpha={},beta={}", args.alpha, args.beta);
            let rows = vec![moment_row(label, &r, String::new())];
            (
                json!({ "lambda": lambda_s, "alpha": args.alpha, "beta": args.beta }),
                json!([r]),
                MOMENT_HEADER.to_vec(),
                rows,
                r.passed,
            )
        }
        GammaCheckKind::LogExpansion => {
            let r = stirling_log_expansion_check(args.n, args.m_cap, &lambda, args.tolerance, &spec)?;
            let note = r.reason.clone().unwrap_or_else(|| match r.m_reached {
                Some(m) => format!("within tolerance from m={m}"),
                None => String::new(),
            });
            let rows = vec![moment_row(format!("n={}", args.n), &r.result, note)];
            (
                json!({ "lambda": lambda_s, "n": args.n, "m_cap": args.m_cap, "tolerance": args.tolerance }),
                json!([r]),
                MOMENT_HEADER.to_vec(),
                rows,
                r.result.passed,
            )
        }
        GammaCheckKind::Erlang => {
            let xs = rational_list(&args.x)?;
            if args.r_max == 0 {
                return Err(Error::OutOfRange("r_max must be at least 1".into()));
            }
            let mut keys = Vec::new();
            for r in 1..=args.r_max {
                for x in &xs {
                    for n in 0..=args.n_max {
                        keys.push((r, x.clone(), n));
                    }
                }
            }
            let checks = pool(jobs)?.install(|| {
                keys.par_iter()
                    .map(|(r, x, n)| erlang_bridge_check(*n, *r, &lambda, x))
                    .collect::<Result<Vec<_>>>()
            })?;
            let ok = checks.iter().all(|c| c.pass);
            let mut results = Vec::new();
            let mut rows = Vec::new();
            for ((r, x, n), c) in keys.iter().zip(&checks) {
                let x = to_ratio_string(x);
                rows.push(vec![
                    r.to_string(),
                    x.clone(),
                    n.to_string(),
                    to_ratio_string(&c.lhs),
                    to_ratio_string(&c.rhs),
                    c.pass.to_string(),
                ]);
                results.push(json!({ "r": r, "x": x, "n": n, "check": c }));
            }
            (
                json!({ "lambda": lambda_s, "n_max": args.n_max, "r_max": args.r_max, "x": ratio_strings(&xs) }),
                Value::Array(results),
                vec!["r", "x", "n", "lhs", "rhs", "pass"],
                rows,
                ok,
            )
        }
    };
    let mut params = params;
    params["check"] = json!(check_name(args.check));
    Ok(Report { command: "gamma-check", params, results, csv_header: header, csv_rows: rows, ok })
}

fn check_name(kind: GammaCheckKind) -> &'static str {
    match kind {
        GammaCheckKind::Thm11 => "thm11",
        GammaCheckKind::Gammafn => "gammafn",
        GammaCheckKind::Normalization => "normalization",
        GammaCheckKind::LogExpansion => "log-expansion",
        GammaCheckKind::Erlang => "erlang",
    }
}

pub fn sample(args: &SampleArgs) -> Result<Report> {
    let lambda_q = parse_rational(&args.lambda)?;
    let lambda = to_f64(&lambda_q);
    let samples = sample_deg_gamma11(lambda, args.seed, args.count)?;
    let (mean, stderr) = mean_and_stderr(&samples);
    let ks = ks_statistic(&samples, |x| deg_gamma11_cdf(x, lambda));
    let crit = ks_critical_1pct(samples.len());
    let rows = samples.iter().enumerate().map(|(i, x)| vec![i.to_string(), float(*x)]).collect();
    Ok(Report {
        command: "sample",
        params: json!({ "lambda": to_ratio_string(&lambda_q), "seed": args.seed, "count": args.count }),
        results: json!({
            "mean": mean,
            "stderr": stderr,
            "ks_statistic": ks,
            "ks_critical_1pct": crit,
            "samples": samples,
        }),
        csv_header: vec!["index", "value"],
        csv_rows: rows,
        ok: true,
    })
}
