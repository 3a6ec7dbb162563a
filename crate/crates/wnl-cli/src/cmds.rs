use std::path::Path;

use num_complex::Complex64;
use serde_json::json;

use wnl_core::bollobas::{bollobas_correct, BollobasTrace, Mode};
use wnl_core::constants::{critical_radius, delta_n, ConstantsTable};
use wnl_core::counterexamples::{
    exact_sup_pr, make_fn_power, make_pr, make_q, verify_pr, verify_q, ClauseOutcome, SupRow,
    VerificationReport,
};
use wnl_core::norms::{s_norm, sup_norm, v_norm, OptimizerConfig};
use wnl_core::polynomial::Polynomial;
use wnl_core::{Functional, LpSpace, LpVector};

use crate::config::{parse_space, FormatArg, Settings};
use crate::io::{json_line, read_json, with_schema, Sink};
use crate::{checks, Failure, Family, ModeArg, NormKind};

fn reject_csv(st: &Settings, cmd: &str) -> Result<(), Failure> {
    if st.format == Some(FormatArg::Csv) {
        return Err(Failure::Usage(format!("{cmd} emits JSON only")));
    }
    Ok(())
}

/// --space flag beats the config-file hint; either must agree with the file.
fn check_space(
    st: &Settings,
    flag: Option<&str>,
    actual: LpSpace,
) -> Result<(), Failure> {
    let expected = match flag {
        Some(text) => Some(parse_space(text)?),
        None => st.space_hint,
    };
    if let Some((n, p)) = expected {
        if n != actual.dim {
            return Err(Failure::Core(wnl_core::Error::DimensionMismatch {
                expected: n,
                got: actual.dim,
            }));
        }
        if p != actual.p {
            return Err(Failure::Core(wnl_core::Error::Schema(format!(
                "space mismatch: expected p = {p}, file has p = {}",
                actual.p
            ))));
        }
    }
    Ok(())
}

pub fn constants(st: &Settings, n_max: usize) -> Result<(), Failure> {
    let table = ConstantsTable::new(n_max)?;
    let mut sink = Sink::new(st.out.clone());
    match st.format.unwrap_or(FormatArg::Csv) {
        FormatArg::Csv => {
            sink.line("N,delta_N,s_N,s_half_N,M_N");
            for row in &table.rows {
                sink.line(&format!(
                    "{},{},{},{},{}",
                    row.n, row.delta, row.s_n, row.s_half, row.m
                ));
            }
        }
        FormatArg::Json => {
            sink.line(&json_line(&json!({ "rows": table.rows })));
        }
    }
    sink.finish()
}

pub fn norm(
    st: &Settings,
    space: Option<&str>,
    poly_path: &Path,
    mode: NormKind,
    s: Option<f64>,
) -> Result<(), Failure> {
    reject_csv(st, "norm")?;
    let poly: Polynomial = read_json(poly_path)?;
    check_space(st, space, poly.space())?;
    let res = match mode {
        NormKind::S => {
            let s = s.ok_or_else(|| Failure::Usage("--mode s requires --s".into()))?;
            s_norm(&poly, s, &st.cfg)?
        }
        NormKind::Sup => {
            if s.is_some() {
                return Err(Failure::Usage("--s only applies with --mode s".into()));
            }
            sup_norm(&poly, &st.cfg)?
        }
        NormKind::V => {
            if s.is_some() {
                return Err(Failure::Usage("--s only applies with --mode s".into()));
            }
            v_norm(&poly, &st.cfg)?
        }
    };
    let mut sink = Sink::new(st.out.clone());
    sink.line(&json_line(&res));
    sink.finish()
}

/// Powers of a unit functional attain their weighted norm at the critical
/// radius, so the verdict pins the sup, the ratio, and the witness radius.
fn verify_fn(
    p: f64,
    k: usize,
    n_trunc: usize,
    cfg: &OptimizerConfig,
) -> Result<VerificationReport, Failure> {
    let space = LpSpace::new(n_trunc, p)?;
    let mut coords = vec![Complex64::new(0.0, 0.0); n_trunc];
    coords[0] = Complex64::new(1.0, 0.0);
    let f = Functional::new(space, coords)?;
    let poly = make_fn_power(&f, k)?;

    let sup = sup_norm(&poly, cfg)?;
    let v = v_norm(&poly, cfg)?;
    let delta = delta_n(k)?;
    let r_star = critical_radius(k)?;
    let witness_radius = v.witness.norm();

    let clauses = vec![
        ClauseOutcome {
            name: "fn-sup-norm".into(),
            passed: (sup.value - 1.0).abs() <= 1e-6,
            detail: format!("sup = {:.12}, want 1", sup.value),
        },
        ClauseOutcome {
            name: "fn-v-delta".into(),
            passed: (v.value - delta).abs() <= 1e-6,
            detail: format!("v = {:.12}, delta = {delta:.12}", v.value),
        },
        ClauseOutcome {
            name: "fn-critical-radius".into(),
            passed: (witness_radius - r_star).abs() <= 1e-3,
            detail: format!("|witness| = {witness_radius:.9}, critical radius = {r_star:.9}"),
        },
    ];

    let mut rows = Vec::new();
    for j in 1..=9usize {
        let s = j as f64 / 10.0;
        let res = s_norm(&poly, s, cfg)?;
        let exact = s.powi(k as i32);
        rows.push(SupRow {
            s,
            numeric: res.value,
            exact,
            gap: exact - res.value,
            escape_index: res.witness.dominant_index(),
        });
    }

    Ok(VerificationReport {
        family: "fN".into(),
        rows,
        clauses,
        truncation: None,
        warnings: Vec::new(),
    })
}

fn family_poly(
    family: Family,
    p: f64,
    k: usize,
    r: Option<f64>,
    n_trunc: usize,
) -> Result<Polynomial, Failure> {
    match family {
        Family::Pr => {
            let r = r.ok_or_else(|| Failure::Usage("--r is required for family Pr".into()))?;
            Ok(make_pr(p, k, r, n_trunc)?)
        }
        Family::Q => Ok(make_q(p, k, n_trunc)?),
        Family::Fn => {
            let space = LpSpace::new(n_trunc, p)?;
            let mut coords = vec![Complex64::new(0.0, 0.0); n_trunc];
            coords[0] = Complex64::new(1.0, 0.0);
            Ok(make_fn_power(&Functional::new(space, coords)?, k)?)
        }
    }
}

fn sweep_rows(
    family: Family,
    p: f64,
    k: usize,
    r: Option<f64>,
    n_trunc: usize,
    points: usize,
    cfg: &OptimizerConfig,
) -> Result<Vec<SupRow>, Failure> {
    let poly = family_poly(family, p, k, r, n_trunc)?;
    let mut rows = Vec::with_capacity(points);
    for j in 1..=points {
        let s = j as f64 / points as f64;
        let res = s_norm(&poly, s, cfg)?;
        let exact = match family {
            Family::Pr => exact_sup_pr(s, r.expect("family_poly checked r"), k)?.0,
            Family::Q => s.powi(k as i32) + s.powi(k as i32 + 1),
            Family::Fn => s.powi(k as i32),
        };
        rows.push(SupRow {
            s,
            numeric: res.value,
            exact,
            gap: exact - res.value,
            escape_index: res.witness.dominant_index(),
        });
    }
    Ok(rows)
}

pub fn counterexample(
    st: &Settings,
    family: Family,
    p: f64,
    k: usize,
    r: Option<f64>,
    n_trunc: usize,
    s_grid: usize,
) -> Result<(), Failure> {
    let mut report = match family {
        Family::Pr => {
            let r = r.ok_or_else(|| Failure::Usage("--r is required for family Pr".into()))?;
            verify_pr(p, k, r, n_trunc, &st.cfg)?
        }
        Family::Q => verify_q(p, k, n_trunc, &st.cfg)?,
        Family::Fn => verify_fn(p, k, n_trunc, &st.cfg)?,
    };
    if s_grid > 0 {
        report.rows = sweep_rows(family, p, k, r, n_trunc, s_grid, &st.cfg)?;
    }

    let mut sink = Sink::new(st.out.clone());
    match st.format.unwrap_or(FormatArg::Csv) {
        FormatArg::Csv => {
            sink.line("s,numeric,exact,gap,escape_index");
            for row in &report.rows {
                sink.line(&format!(
                    "{},{},{},{},{}",
                    row.s, row.numeric, row.exact, row.gap, row.escape_index
                ));
            }
            sink.line(&json_line(&json!({
                "family": report.family,
                "passed": report.passed(),
                "clauses": report.clauses,
                "truncation": report.truncation,
                "warnings": report.warnings,
            })));
        }
        FormatArg::Json => {
            let mut doc = serde_json::to_value(&report).expect("serializable report");
            doc.as_object_mut()
                .expect("report is an object")
                .insert("passed".into(), json!(report.passed()));
            sink.line(&with_schema(doc).to_string());
        }
    }
    sink.finish()?;
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn emit_trace(sink: &mut Sink, trace: &BollobasTrace) {
    for row in &trace.rows {
        sink.line(&json_line(row));
    }
    if let Some(fin) = &trace.final_record {
        sink.line(&json_line(fin));
    }
}

pub fn bollobas(
    st: &Settings,
    space: Option<&str>,
    poly_path: &Path,
    x_path: &Path,
    eps: f64,
    mode_arg: ModeArg,
) -> Result<(), Failure> {
    reject_csv(st, "bollobas")?;
    let poly: Polynomial = read_json(poly_path)?;
    let x: LpVector = read_json(x_path)?;
    check_space(st, space, poly.space())?;
    let mode = match mode_arg {
        ModeArg::Faithful => Mode::Faithful,
        ModeArg::Practical => Mode::practical_for(&poly, &st.cfg)?,
    };
    let mut sink = Sink::new(st.out.clone());
    match bollobas_correct(&poly, &x, eps, &mode, &st.cfg) {
        Ok((_, _, trace)) => {
            emit_trace(&mut sink, &trace);
            sink.finish()
        }
        Err(wnl_core::Error::GuaranteeFailed { detail, trace }) => {
            emit_trace(&mut sink, &trace);
            sink.line(&json_line(&json!({
                "verdict": "failed",
                "detail": detail,
            })));
            sink.finish()?;
            Err(Failure::Verification)
        }
        Err(e) => Err(e.into()),
    }
}

pub fn verify(st: &Settings, filter: Option<&str>) -> Result<(), Failure> {
    reject_csv(st, "verify")?;
    let mut sink = Sink::new(st.out.clone());
    let mut failed: Vec<&str> = Vec::new();
    let mut ran = 0usize;
    for (name, check) in checks::ALL {
        if let Some(f) = filter {
            if !name.contains(f) {
                continue;
            }
        }
        ran += 1;
        match check(&st.cfg) {
            Ok(detail) => sink.line(&format!("PASS {name} {detail}")),
            Err(detail) => {
                failed.push(name);
                sink.line(&format!("FAIL {name} {detail}"));
            }
        }
    }
    if ran == 0 {
        return Err(Failure::Usage(format!(
            "no check matches filter {:?}",
            filter.unwrap_or_default()
        )));
    }
    sink.line(&json_line(&json!({
        "total": ran,
        "passed": ran - failed.len(),
        "failed": failed,
    })));
    sink.finish()?;
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}
