//! Iterative correction toward an attained weighted maximum: precompose with
//! small rank-one contractions pulling mass toward the current near-maximizer,
//! with a step schedule whose sums certify the final distance bounds, plus the
//! localization and convergence monitors that justify each step.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::constants::{m_n, mu};
use crate::error::{Error, Result};
use crate::norms::{
    ball_project, projected_ascent, random_directions, structural_directions, sup_diff_norm,
    v_norm, v_norm_with_start, weighted_gradient_slice, weighted_objective,
    weighted_objective_slice, NormResult, OptimizerConfig,
};
use crate::polynomial::{Polynomial, RankOneUpdate};
use crate::space::{
    dist_to_span, dist_to_span_with_argmin, modulus_of_convexity, norm_gradient_slice,
    phase_aligned_dist, LpSpace, LpVector,
};

/// Which constants drive the step schedule and the slack quantities.
///
/// Faithful uses the theoretical M_N and mu, which make the steps microscopic
/// (mu is of order 1e-46 at desk scale): the run is then a no-op at float
/// precision but every inequality can still be checked. Practical replaces
/// M_N by a measured Lipschitz bound and floors mu at kappa*rho^2, producing
/// steps that actually move; all guarantees are still verified a posteriori,
/// so a too-loose schedule can only fail loudly, never lie.
#[derive(Clone, Copy, Debug, Serialize)]
pub enum Mode {
    Faithful,
    Practical { m_override: f64, kappa: f64 },
}

impl Mode {
    pub fn is_faithful(&self) -> bool {
        matches!(self, Mode::Faithful)
    }

    /// Practical constants measured on the polynomial itself: M such that the
    /// Lipschitz bound Lip <= v * M / 2 holds with a factor-2 safety margin,
    /// floored at 1 so the first step stays below eps/2.
    pub fn practical_for(poly: &Polynomial, cfg: &OptimizerConfig) -> Result<Mode> {
        let v = v_norm(poly, cfg)?.value;
        if v <= 0.0 || !v.is_finite() {
            return Err(Error::ZeroPolynomial);
        }
        let lip = lipschitz_estimate(poly, cfg)?;
        Ok(Mode::Practical {
            m_override: (4.0 * lip / v).max(1.0),
            kappa: 1e-3,
        })
    }

    /// The M constant the schedule divides by.
    pub fn m_constant(&self, degree: usize) -> Result<f64> {
        match self {
            Mode::Faithful => m_n(degree),
            Mode::Practical { m_override, .. } => {
                if !(*m_override > 0.0 && m_override.is_finite()) {
                    return Err(Error::OutOfDomain {
                        what: "m_override",
                        value: *m_override,
                    });
                }
                Ok(*m_override)
            }
        }
    }

    /// The localization slack at step size rho.
    pub fn mu_slack(&self, rho: f64, space: LpSpace) -> Result<f64> {
        let faithful = mu(rho, space)?;
        match self {
            Mode::Faithful => Ok(faithful),
            Mode::Practical { kappa, .. } => Ok(faithful.max(kappa * rho * rho)),
        }
    }

    /// The hypothesis slack for the entry gate: mu at the first step size.
    pub fn eta_gate(&self, eps: f64, degree: usize, space: LpSpace) -> Result<f64> {
        if !(eps > 0.0 && eps < 1.0) {
            return Err(Error::OutOfDomain {
                what: "eps",
                value: eps,
            });
        }
        let m = self.m_constant(degree)?;
        self.mu_slack(eps / (2.0 * m), space)
    }
}

fn dual_exponent(p: f64) -> f64 {
    if p == 1.0 {
        f64::INFINITY
    } else if p.is_infinite() {
        1.0
    } else {
        p / (p - 1.0)
    }
}

/// Sampled Lipschitz bound of |P| on the closed unit ball: the dual norm of
/// the holomorphic gradient, maximized over structural and random points at
/// several radii. A lower estimate of the true constant, so callers add their
/// own safety factor.
pub fn lipschitz_estimate(poly: &Polynomial, cfg: &OptimizerConfig) -> Result<f64> {
    cfg.validate()?;
    let space = poly.space();
    let q = dual_exponent(space.p);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x6c69_7073);
    let mut dirs = structural_directions(space.dim, space.p);
    dirs.extend(random_directions(
        space.dim,
        space.p,
        cfg.restarts.max(8),
        &mut rng,
    ));
    let mut best = 0.0f64;
    for dir in &dirs {
        for radius in [0.35, 0.7, 0.999] {
            let z: Vec<Complex64> = dir.iter().map(|d| d * radius).collect();
            let g = poly.derivative_slice(&z);
            best = best.max(crate::space::lp_norm_slice(q, &g));
        }
    }
    Ok(best)
}

/// The step sizes actually performed: rho_1 = eps/(2M), then
/// rho_n = mu(rho_1)/(2^n M), truncated at the step tolerance or max_iters.
/// Construction verifies the two sum bounds the final guarantees rest on:
/// M * sum rho_n <= eps and M * sum_{n>=2} rho_n <= mu(rho_1).
#[derive(Clone, Debug, Serialize)]
pub struct Schedule {
    pub eps: f64,
    pub m: f64,
    pub rho: Vec<f64>,
    pub max_iters: usize,
}

impl Schedule {
    pub fn new(
        eps: f64,
        mode: &Mode,
        degree: usize,
        space: LpSpace,
        step_tol: f64,
        max_iters: usize,
    ) -> Result<Schedule> {
        if !(eps > 0.0 && eps < 1.0) {
            return Err(Error::OutOfDomain {
                what: "eps",
                value: eps,
            });
        }
        let m = mode.m_constant(degree)?;
        let rho_1 = eps / (2.0 * m);
        let mu_1 = mode.mu_slack(rho_1, space)?;
        let mut rho = Vec::new();
        if rho_1 > step_tol {
            rho.push(rho_1);
            let mut pow = 4.0; // 2^n at n = 2
            while rho.len() < max_iters {
                let r = mu_1 / (pow * m);
                if r <= step_tol {
                    break;
                }
                rho.push(r);
                pow *= 2.0;
            }
        }
        let total: f64 = rho.iter().sum();
        let tail: f64 = rho.iter().skip(1).sum();
        if m * total > eps * (1.0 + 1e-12) {
            return Err(Error::InequalityViolated {
                detail: format!("schedule sum M*sum(rho) = {} exceeds eps = {eps}", m * total),
            });
        }
        if m * tail > mu_1 * (1.0 + 1e-12) {
            return Err(Error::InequalityViolated {
                detail: format!(
                    "schedule tail M*sum(rho_n, n>=2) = {} exceeds mu(rho_1) = {mu_1}",
                    m * tail
                ),
            });
        }
        Ok(Schedule {
            eps,
            m,
            rho,
            max_iters,
        })
    }
}

/// Scale so the weighted norm is 1.
pub fn normalize_v(poly: &Polynomial, cfg: &OptimizerConfig) -> Result<Polynomial> {
    if poly.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let v = v_norm(poly, cfg)?.value;
    if !(v > 0.0 && v.is_finite()) {
        return Err(Error::ZeroPolynomial);
    }
    poly.scale_by(1.0 / v)
}

/// Outcome of the off-tube maximization: does the weighted objective, away
/// from the complex line of x by at least rho, stay below the norm minus the
/// slack? `notes` carries precondition violations that Practical mode only
/// records instead of rejecting.
#[derive(Clone, Debug, Serialize)]
pub struct LocalizationOutcome {
    pub holds: bool,
    pub lhs: f64,
    pub rhs: f64,
    pub notes: Vec<String>,
}

/// Maximizes `(1 - ||y||^2)|S(y)|` subject to `dist_to_span(y, x) >= rho` by
/// a penalty method (weight ramped x10 over 5 rounds), then compares against
/// `v_norm(S) - mu(rho)`.
pub fn localization_check(
    s_poly: &Polynomial,
    x: &LpVector,
    rho: f64,
    mode: &Mode,
    cfg: &OptimizerConfig,
) -> Result<LocalizationOutcome> {
    let v_res = v_norm(s_poly, cfg)?;
    localization_check_with(s_poly, x, rho, mode, cfg, &v_res)
}

fn localization_check_with(
    s_poly: &Polynomial,
    x: &LpVector,
    rho: f64,
    mode: &Mode,
    cfg: &OptimizerConfig,
    v_res: &NormResult,
) -> Result<LocalizationOutcome> {
    cfg.validate()?;
    let space = s_poly.space();
    crate::space::check_same_space(space, x.space)?;
    if !(rho >= 0.0 && rho.is_finite()) {
        return Err(Error::OutOfDomain {
            what: "rho",
            value: rho,
        });
    }
    if x.is_zero() {
        return Err(Error::ZeroVector);
    }
    let v = v_res.value;

    let mut notes = Vec::new();
    if !(0.5 <= v && v <= 2.0) {
        let msg = format!("weighted norm {v} outside [1/2, 2]");
        if mode.is_faithful() {
            return Err(Error::HypothesisViolated { detail: msg });
        }
        notes.push(msg);
    }
    let m = mode.m_constant(s_poly.degree().max(1))?;
    if rho > 0.0 && rho >= 1.0 / (16.0 * m) {
        let msg = format!("rho = {rho} not below 1/(16M) = {}", 1.0 / (16.0 * m));
        if mode.is_faithful() {
            return Err(Error::HypothesisViolated { detail: msg });
        }
        notes.push(msg);
    }

    if rho == 0.0 {
        // complement of the tube is the whole ball; the inequality is
        // exactly the norm beating itself, so it never holds
        return Ok(LocalizationOutcome {
            holds: false,
            lhs: v,
            rhs: v,
            notes,
        });
    }
    let slack = mode.mu_slack(rho, space)?;
    let rhs = v - slack;
    if space.dim == 1 {
        // span of x is the whole space: nothing lies off the tube
        return Ok(LocalizationOutcome {
            holds: true,
            lhs: 0.0,
            rhs,
            notes,
        });
    }

    let p = space.p;
    let dist = |z: &[Complex64]| -> Result<(f64, Complex64)> {
        let zv = LpVector::new(space, z.to_vec())?;
        dist_to_span_with_argmin(&zv, x)
    };

    // push a point out of the tube along its own off-span component
    let make_feasible = |z: &[Complex64]| -> Result<Option<Vec<Complex64>>> {
        let mut cur = z.to_vec();
        for _ in 0..3 {
            let (d, lam) = dist(&cur)?;
            if d >= rho * (1.0 - 1e-9) {
                return Ok(Some(cur));
            }
            let target = rho * (1.0 + 1e-9);
            if d > 1e-14 {
                for (ci, xi) in cur.iter_mut().zip(&x.coords) {
                    let base = lam * xi;
                    *ci = base + (*ci - base) * (target / d);
                }
            } else {
                // sitting on the span: push along the basis direction
                // farthest from it
                let mut best_j = 0;
                let mut best_d = -1.0;
                for j in 0..space.dim {
                    let e = LpVector::basis(space, j)?;
                    let dj = dist_to_span(&e, x)?;
                    if dj > best_d {
                        best_d = dj;
                        best_j = j;
                    }
                }
                if best_d <= 1e-14 {
                    return Ok(None);
                }
                cur[best_j] += Complex64::new(target / best_d, 0.0);
            }
            ball_project(p, &mut cur);
        }
        let (d, _) = dist(&cur)?;
        Ok(if d >= rho * (1.0 - 1e-6) {
            Some(cur)
        } else {
            None
        })
    };

    let mut starts: Vec<Vec<Complex64>> = Vec::new();
    if let Some(w) = make_feasible(&v_res.witness.coords)? {
        starts.push(w);
    }
    let radius = v_res.s_star.clamp(0.3, 0.95);
    for dir in structural_directions(space.dim, p) {
        starts.push(dir.iter().map(|z| z * radius).collect());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x6c6f_6361);
    for dir in random_directions(space.dim, p, cfg.restarts.max(4), &mut rng) {
        starts.push(dir.iter().map(|z| z * radius).collect());
    }

    let penalized = |z: &[Complex64], weight: f64| -> f64 {
        let base = weighted_objective_slice(s_poly, z);
        let d = match dist(z) {
            Ok((d, _)) => d,
            Err(_) => return f64::NEG_INFINITY,
        };
        let short = (rho - d).max(0.0);
        base - weight * short * short
    };
    let penalized_gradient = |z: &[Complex64], weight: f64| -> Vec<Complex64> {
        let mut g = weighted_gradient_slice(s_poly, z);
        if let Ok((d, lam)) = dist(z) {
            if d < rho && d > 1e-12 {
                let w: Vec<Complex64> = z
                    .iter()
                    .zip(&x.coords)
                    .map(|(zi, xi)| zi - lam * xi)
                    .collect();
                let ng = norm_gradient_slice(p, &w);
                let pull = 2.0 * weight * (rho - d);
                for (gi, ni) in g.iter_mut().zip(&ng) {
                    *gi += ni * pull;
                }
            }
        }
        g
    };
    let project = |z: &mut Vec<Complex64>| ball_project(p, z);

    let mut weight = 10.0 * v.max(1.0);
    let mut candidates = starts;
    for round in 0..5 {
        let value = |z: &[Complex64]| penalized(z, weight);
        let gradient = |z: &[Complex64]| penalized_gradient(z, weight);
        let mut next: Vec<(f64, Vec<Complex64>)> = Vec::with_capacity(candidates.len());
        for start in candidates.drain(..) {
            let out = projected_ascent(
                &value,
                &gradient,
                &project,
                start,
                cfg.max_iters,
                cfg.step_tol,
            );
            next.push((out.value, out.point));
        }
        next.sort_by(|a, b| b.0.total_cmp(&a.0));
        if round > 0 {
            next.truncate(6);
        }
        candidates = next.into_iter().map(|(_, z)| z).collect();
        weight *= 10.0;
    }

    let mut lhs = f64::NEG_INFINITY;
    for cand in &candidates {
        if let Some(z) = make_feasible(cand)? {
            lhs = lhs.max(weighted_objective_slice(s_poly, &z));
        }
    }
    if !lhs.is_finite() {
        return Err(Error::NoConvergence {
            what: "feasible point for the localization check",
        });
    }

    Ok(LocalizationOutcome {
        holds: lhs < rhs,
        lhs,
        rhs,
        notes,
    })
}

/// State recorded at iteration n, before stepping: the current point and
/// norm, plus the artifacts of the step taken from it (drift, localization of
/// the updated polynomial, distance to the next point).
#[derive(Clone, Debug, Serialize)]
pub struct IterationRow {
    pub n: usize,
    pub rho: f64,
    pub x: LpVector,
    pub v_norm: f64,
    pub margin: f64,
    pub localization: LocalizationOutcome,
    pub dist_to_prev_span: f64,
    pub sup_drift: f64,
    pub drift_bound: f64,
    pub retries: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct FinalRecord {
    pub q: Polynomial,
    pub y: LpVector,
    pub sup_dist: f64,
    pub dist_to_span_x: f64,
    pub margin: f64,
    pub eps: f64,
    pub rho_1: f64,
    pub within_initial_tube: bool,
    pub iterations: usize,
    pub verdict: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct BollobasTrace {
    pub rows: Vec<IterationRow>,
    pub final_record: Option<FinalRecord>,
}

/// The correction loop: from a unit-norm P and a near-attainment point x,
/// produce Q within eps of P in sup norm that attains its weighted norm at a
/// point y within eps of the complex line of x. All three guarantees are
/// checked on the output; the trace records every step for forensics.
pub fn bollobas_correct(
    poly: &Polynomial,
    x: &LpVector,
    eps: f64,
    mode: &Mode,
    cfg: &OptimizerConfig,
) -> Result<(Polynomial, LpVector, BollobasTrace)> {
    cfg.validate()?;
    let space = poly.space();
    crate::space::check_same_space(space, x.space)?;
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::OutOfDomain {
            what: "eps",
            value: eps,
        });
    }
    if mode.is_faithful() && eps >= 1.0 / 16.0 {
        return Err(Error::OutOfDomain {
            what: "eps",
            value: eps,
        });
    }
    let degree = poly.degree();
    if degree == 0 {
        return Err(Error::OutOfDomain {
            what: "degree",
            value: 0.0,
        });
    }

    let v0 = v_norm(poly, cfg)?;
    if (v0.value - 1.0).abs() > 1e-6 {
        return Err(Error::HypothesisViolated {
            detail: format!("weighted norm {} is not 1 within 1e-6", v0.value),
        });
    }
    let eta = mode.eta_gate(eps, degree, space)?;
    let margin0 = v0.value - weighted_objective(poly, x)?;
    if margin0 > eta {
        return Err(Error::HypothesisViolated {
            detail: format!("near-attainment margin {margin0:.3e} exceeds the gate {eta:.3e}"),
        });
    }

    let schedule = Schedule::new(eps, mode, degree, space, cfg.step_tol, 64)?;
    let m = schedule.m;
    let rho_1 = schedule.rho.first().copied().unwrap_or(0.0);

    let mut rows: Vec<IterationRow> = Vec::new();
    let mut p_cur = poly.clone();
    let mut x_cur = x.clone();
    let mut v_cur = v0;
    let mut margin_cur = margin0;

    for (i, &rho) in schedule.rho.iter().enumerate() {
        let n = i + 1;
        if x_cur.norm() < 1e-8 {
            // the near-maximizers collapse to the origin; no projection line
            // exists there, and the current pair already attains
            break;
        }
        let t = RankOneUpdate::contraction(rho, &x_cur)?;
        let p_next = p_cur.precompose(t)?;
        let sup_drift = sup_diff_norm(&p_cur, &p_next, cfg)?;
        let drift_bound = rho * v_cur.value * m / 2.0;

        // next near-attainment point, accepted only within the mode's slack
        let next_rho = schedule.rho.get(i + 1).copied().unwrap_or(rho);
        let slack = mode.mu_slack(next_rho, space)?;
        let mut retries = 0usize;
        let mut cfg_try = cfg.clone();
        let (v_next, margin_next) = loop {
            let v_next = v_norm_with_start(&p_next, &cfg_try, &x_cur)?;
            let margin = v_next.value - weighted_objective(&p_next, &v_next.witness)?;
            if margin <= slack {
                break (v_next, margin);
            }
            if retries >= 1 {
                return Err(Error::NoConvergence {
                    what: "near-attainment margin after restart escalation",
                });
            }
            retries += 1;
            cfg_try.restarts *= 4;
        };

        let localization = localization_check_with(&p_next, &x_cur, rho, mode, cfg, &v_next)?;
        let dist_next = dist_to_span(&v_next.witness, &x_cur)?;

        rows.push(IterationRow {
            n,
            rho,
            x: x_cur.clone(),
            v_norm: v_cur.value,
            margin: margin_cur,
            localization,
            dist_to_prev_span: dist_next,
            sup_drift,
            drift_bound,
            retries,
        });

        p_cur = p_next;
        x_cur = v_next.witness.clone();
        margin_cur = margin_next;
        v_cur = v_next;
    }

    let iterations = rows.len();
    let sup_dist = sup_diff_norm(poly, &p_cur, cfg)?;
    let dist_x = dist_to_span(&x_cur, x)?;
    let margin_final = v_cur.value - weighted_objective(&p_cur, &x_cur)?;
    let within_initial_tube = iterations == 0 || dist_x <= rho_1 + 1e-6;

    let mut failures = Vec::new();
    if sup_dist > eps + 1e-9 {
        failures.push(format!("sup distance {sup_dist} exceeds eps {eps}"));
    }
    if dist_x > eps + 1e-9 {
        failures.push(format!("witness distance to the input line {dist_x} exceeds eps {eps}"));
    }
    let margin_tol = cfg.value_tol.max(1e-12);
    if margin_final > margin_tol {
        failures.push(format!("final attainment margin {margin_final:.3e} exceeds {margin_tol:.3e}"));
    }

    let verdict = if failures.is_empty() {
        "ok".to_string()
    } else {
        failures.join("; ")
    };
    let trace = BollobasTrace {
        rows,
        final_record: Some(FinalRecord {
            q: p_cur.clone(),
            y: x_cur.clone(),
            sup_dist,
            dist_to_span_x: dist_x,
            margin: margin_final,
            eps,
            rho_1,
            within_initial_tube,
            iterations,
            verdict: verdict.clone(),
        }),
    };
    if !failures.is_empty() {
        return Err(Error::GuaranteeFailed {
            detail: verdict,
            trace: Box::new(trace),
        });
    }
    Ok((p_cur, x_cur, trace))
}

/// Increments of the normalized directions along a run, each against its
/// telescoped bound (2/r) * sum of the rho between the two points.
#[derive(Clone, Debug, Serialize)]
pub struct CauchyReport {
    pub r_min: f64,
    pub increments: Vec<(f64, f64)>,
    pub converged_to_zero: bool,
}

/// Checks the direction sequence x_n/||x_n|| is Cauchy at the rate the step
/// schedule promises, after phase alignment. Points with nearly zero norm are
/// skipped; if all of them are, the run converged to the origin and the
/// direction claim is vacuous.
pub fn cauchy_monitor(trace: &BollobasTrace) -> Result<CauchyReport> {
    if trace.rows.len() < 3 {
        return Err(Error::MonitorViolation {
            detail: format!(
                "trace has {} iterations; the direction monitor needs at least 3",
                trace.rows.len()
            ),
        });
    }
    let mut points: Vec<(&LpVector, f64)> = trace.rows.iter().map(|r| (&r.x, r.rho)).collect();
    let last_rho = trace.rows.last().map(|r| r.rho).unwrap_or(0.0);
    if let Some(f) = &trace.final_record {
        points.push((&f.y, last_rho));
    }

    let kept: Vec<(usize, &LpVector)> = points
        .iter()
        .enumerate()
        .filter(|(_, (x, _))| x.norm() >= 1e-8)
        .map(|(i, (x, _))| (i, *x))
        .collect();
    if kept.is_empty() {
        return Ok(CauchyReport {
            r_min: 0.0,
            increments: Vec::new(),
            converged_to_zero: true,
        });
    }
    let r_min = kept
        .iter()
        .map(|(_, x)| x.norm())
        .fold(f64::INFINITY, f64::min);

    let mut increments = Vec::new();
    for pair in kept.windows(2) {
        let (i, xi) = pair[0];
        let (j, xj) = pair[1];
        let ki = xi.scale(Complex64::new(1.0 / xi.norm(), 0.0));
        let kj = xj.scale(Complex64::new(1.0 / xj.norm(), 0.0));
        let inc = phase_aligned_dist(&kj, &ki)?;
        let rho_sum: f64 = points[i..j].iter().map(|(_, rho)| *rho).sum();
        let bound = (2.0 / r_min) * rho_sum + 1e-8;
        if inc > bound {
            return Err(Error::MonitorViolation {
                detail: format!(
                    "direction increment {inc:.3e} between iterations {} and {} exceeds bound {bound:.3e}",
                    i + 1,
                    j + 1
                ),
            });
        }
        increments.push((inc, bound));
    }
    Ok(CauchyReport {
        r_min,
        increments,
        converged_to_zero: false,
    })
}

/// Worst violation, over sampled ball points, of the contraction shrink bound
/// `||T(y)|| <= ||y|| - ||y|| * delta(2 rho ||y - P_x(y)||)`. Nonpositive
/// means the inequality holds on the sample. Requires rho <= 1/2 (above that
/// the midpoint argument behind the bound breaks down).
pub fn contraction_shrink_violation(
    x: &LpVector,
    rho: f64,
    seed: u64,
    samples: usize,
) -> Result<f64> {
    if !(rho > 0.0 && rho <= 0.5) {
        return Err(Error::OutOfDomain {
            what: "rho",
            value: rho,
        });
    }
    let space = x.space;
    let t = RankOneUpdate::contraction(rho, x)?;
    let proj = RankOneUpdate::projection(x)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x7368_726b);
    let mut worst = f64::NEG_INFINITY;
    let dirs: Vec<Vec<Complex64>> = structural_directions(space.dim, space.p)
        .into_iter()
        .chain(random_directions(
            space.dim,
            space.p,
            samples.max(1),
            &mut rng,
        ))
        .collect();
    for dir in dirs {
        let radius: f64 = rng.gen_range(0.05..0.999);
        let y = LpVector::new(space, dir.iter().map(|d| d * radius).collect())?;
        let ty = t.apply(&y)?;
        let py = proj.apply(&y)?;
        let gap = y.sub(&py)?.norm();
        let delta = modulus_of_convexity(space, (2.0 * rho * gap).min(2.0))?;
        worst = worst.max(ty.norm() - (y.norm() - y.norm() * delta));
    }
    Ok(worst)
}
