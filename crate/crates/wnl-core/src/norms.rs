//! Numerical computation of the three norms (s-norm, sup-norm, weighted
//! v-norm) by seeded multi-start projected gradient ascent, plus the
//! inequality checks tying them together.
//!
//! Every reported value is a lower bound of the true supremum: the ascent
//! only ever evaluates the objective at feasible points. Closed-form oracles
//! live in tests and in the counterexample builders, never here.
//!
//! Determinism contract: identical (polynomial, config, seed) produce
//! bit-identical results. Restarts run in a fixed order and ties keep the
//! earliest start, so a future parallel merge cannot change the outcome.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::constants::{critical_radius, lower_bound_coefficient, s_alpha_n, s_of_n};
use crate::error::{Error, Result};
use crate::optimize::golden_section_max;
use crate::polynomial::Polynomial;
use crate::space::{check_same_space, lp_norm_slice, norm_gradient_slice, LpVector, Weight};

#[derive(Clone, Copy, Debug, Serialize)]
pub struct OptimizerConfig {
    /// random starts per full multi-start run, on top of the structural ones
    pub restarts: usize,
    pub max_iters: usize,
    /// ascent stops when the backtracked step falls below this
    pub step_tol: f64,
    /// two values within this (relative) are considered the same maximum
    pub value_tol: f64,
    pub seed: u64,
    /// outer radial grid resolution for the v-norm
    pub s_grid: usize,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            restarts: 32,
            max_iters: 2000,
            step_tol: 1e-10,
            value_tol: 1e-8,
            seed: 0,
            s_grid: 257,
        }
    }
}

impl OptimizerConfig {
    pub fn with_seed(seed: u64) -> Self {
        OptimizerConfig {
            seed,
            ..OptimizerConfig::default()
        }
    }

    pub(crate) fn validate(&self) -> Result<()> {
        if self.restarts == 0 {
            return Err(Error::OutOfDomain {
                what: "restarts",
                value: 0.0,
            });
        }
        if !(self.step_tol > 0.0) || !(self.value_tol > 0.0) {
            return Err(Error::OutOfDomain {
                what: "tolerance",
                value: self.step_tol.min(self.value_tol),
            });
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", content = "s", rename_all = "snake_case")]
pub enum NormMode {
    SNorm(f64),
    SupNorm,
    VNorm,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Diagnostics {
    /// total gradient steps across all starts
    pub iterations: usize,
    /// ascent runs launched (structural + random + warm)
    pub restarts_used: usize,
    /// per-start best values; for the v-norm this is the outer radial profile
    pub best_per_restart: Vec<f64>,
    pub converged: bool,
    /// |method (a) - method (b)| when the v-norm cross-check disagrees
    pub method_mismatch: Option<f64>,
    /// outer argmax landed on the end of the radial search interval
    pub boundary_hit: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct NormResult {
    pub value: f64,
    pub witness: LpVector,
    pub s_star: f64,
    pub mode: NormMode,
    pub diagnostics: Diagnostics,
}

// ---------------------------------------------------------------------------
// Ascent engine
// ---------------------------------------------------------------------------

pub(crate) struct AscentOutcome {
    pub value: f64,
    pub point: Vec<Complex64>,
    pub iterations: usize,
    pub converged: bool,
}

/// Projected gradient ascent with a doubling/halving line search. `project`
/// must map any point into the feasible set; `max_iters = 0` degrades to
/// plain evaluation of the projected start (the sampling fallback).
pub(crate) fn projected_ascent(
    value: &dyn Fn(&[Complex64]) -> f64,
    gradient: &dyn Fn(&[Complex64]) -> Vec<Complex64>,
    project: &dyn Fn(&mut Vec<Complex64>),
    start: Vec<Complex64>,
    max_iters: usize,
    step_tol: f64,
) -> AscentOutcome {
    let mut x = start;
    project(&mut x);
    let mut fx = value(&x);
    let mut step = 0.1f64;
    let mut iterations = 0usize;
    let mut converged = max_iters == 0;
    'outer: for _ in 0..max_iters {
        iterations += 1;
        let g = gradient(&x);
        let gn = g.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if gn < 1e-14 {
            converged = true;
            break;
        }
        loop {
            if step < step_tol {
                converged = true;
                break 'outer;
            }
            let scale = step / gn;
            let mut cand: Vec<Complex64> =
                x.iter().zip(&g).map(|(xi, gi)| xi + gi * scale).collect();
            project(&mut cand);
            let fc = value(&cand);
            if fc > fx {
                x = cand;
                fx = fc;
                step = (step * 1.5).min(1.0);
                break;
            }
            step *= 0.5;
        }
    }
    AscentOutcome {
        value: fx,
        point: x,
        iterations,
        converged,
    }
}

/// Basis vectors under four phases, plus the uniform direction: the warm
/// starts where diagonal and functional-power maxima provably sit (phase
/// flips matter once coefficients mix signs).
pub(crate) fn structural_directions(dim: usize, p: f64) -> Vec<Vec<Complex64>> {
    let phases = [
        Complex64::new(1.0, 0.0),
        Complex64::new(-1.0, 0.0),
        Complex64::new(0.0, 1.0),
        Complex64::new(0.0, -1.0),
    ];
    let zero = Complex64::new(0.0, 0.0);
    let mut out = Vec::with_capacity(4 * dim + 1);
    for j in 0..dim {
        for ph in phases {
            let mut v = vec![zero; dim];
            v[j] = ph;
            out.push(v);
        }
    }
    let ones = vec![Complex64::new(1.0, 0.0); dim];
    let n = lp_norm_slice(p, &ones);
    out.push(ones.iter().map(|z| z / n).collect());
    out
}

pub(crate) fn random_directions(
    dim: usize,
    p: f64,
    count: usize,
    rng: &mut ChaCha8Rng,
) -> Vec<Vec<Complex64>> {
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let mut v: Vec<Complex64> = (0..dim)
            .map(|_| Complex64::new(rng.gen::<f64>() * 2.0 - 1.0, rng.gen::<f64>() * 2.0 - 1.0))
            .collect();
        let n = lp_norm_slice(p, &v);
        if n > 0.0 {
            for z in v.iter_mut() {
                *z /= n;
            }
        } else {
            v[0] = Complex64::new(1.0, 0.0);
        }
        out.push(v);
    }
    out
}

/// Smooth lp spheres support gradient steps; p = 1 and p = infinity fall back
/// to pure sampling, so they get a denser random bank.
fn is_smooth(p: f64) -> bool {
    p > 1.0 && p.is_finite()
}

const SAMPLING_MULTIPLIER: usize = 64;

struct SphereSearch {
    value: f64,
    point: Vec<Complex64>,
    iterations: usize,
    restarts_used: usize,
    best_per_restart: Vec<f64>,
    converged: bool,
}

/// Best of `|P(x)|` over the sphere of radius s, ascending from every start.
/// Starts are unit directions; extra warm directions may be appended.
fn sphere_search(
    poly: &Polynomial,
    s: f64,
    directions: &[Vec<Complex64>],
    max_iters: usize,
    step_tol: f64,
    record_bests: bool,
) -> SphereSearch {
    let p = poly.space().p;
    let value = |z: &[Complex64]| poly.eval_slice(z).norm();
    let gradient = |z: &[Complex64]| {
        let pv = poly.eval_slice(z);
        let pd = poly.derivative_slice(z);
        let ap = pv.norm();
        if ap > 1e-300 {
            pd.iter().map(|di| di.conj() * pv / ap).collect()
        } else {
            // at a zero of P pick the phase that the derivative suggests
            pd.iter().map(|di| di.conj()).collect()
        }
    };
    let project = move |z: &mut Vec<Complex64>| {
        let n = lp_norm_slice(p, z);
        if n > 0.0 {
            let f = s / n;
            for zi in z.iter_mut() {
                *zi *= f;
            }
        } else {
            z[0] = Complex64::new(s, 0.0);
        }
    };
    let iters = if is_smooth(p) { max_iters } else { 0 };

    let mut best_value = f64::NEG_INFINITY;
    let mut best_point = Vec::new();
    let mut iterations = 0usize;
    let mut converged = false;
    let mut bests = Vec::new();
    for dir in directions {
        let start: Vec<Complex64> = dir.iter().map(|z| z * s).collect();
        let out = projected_ascent(&value, &gradient, &project, start, iters, step_tol);
        iterations += out.iterations;
        converged |= out.converged;
        if record_bests {
            bests.push(out.value);
        }
        if out.value > best_value {
            best_value = out.value;
            best_point = out.point;
        }
    }
    SphereSearch {
        value: best_value,
        point: best_point,
        iterations,
        restarts_used: directions.len(),
        best_per_restart: bests,
        converged,
    }
}

fn full_direction_bank(poly: &Polynomial, cfg: &OptimizerConfig, rng: &mut ChaCha8Rng) -> Vec<Vec<Complex64>> {
    let space = poly.space();
    let mut bank = structural_directions(space.dim, space.p);
    let random_count = if is_smooth(space.p) {
        cfg.restarts
    } else {
        cfg.restarts * SAMPLING_MULTIPLIER
    };
    bank.extend(random_directions(space.dim, space.p, random_count, rng));
    bank
}

// ---------------------------------------------------------------------------
// Public norm operations
// ---------------------------------------------------------------------------

/// `sup { |P(x)| : ||x|| = s }`. The maximum-modulus principle pushes the
/// maximizer of the ball sup to the sphere, so this equals sup over s B_X.
pub fn s_norm(poly: &Polynomial, s: f64, cfg: &OptimizerConfig) -> Result<NormResult> {
    cfg.validate()?;
    if !(s > 0.0 && s <= 1.0) {
        return Err(Error::OutOfDomain { what: "s", value: s });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let bank = full_direction_bank(poly, cfg, &mut rng);
    let search = sphere_search(poly, s, &bank, cfg.max_iters, cfg.step_tol, true);
    let witness = LpVector::new(poly.space(), search.point)?;
    Ok(NormResult {
        value: search.value,
        witness,
        s_star: s,
        mode: NormMode::SNorm(s),
        diagnostics: Diagnostics {
            iterations: search.iterations,
            restarts_used: search.restarts_used,
            best_per_restart: search.best_per_restart,
            converged: search.converged,
            method_mismatch: None,
            boundary_hit: false,
        },
    })
}

/// `sup { |P(x)| : ||x|| <= 1 }`, attained on the unit sphere.
pub fn sup_norm(poly: &Polynomial, cfg: &OptimizerConfig) -> Result<NormResult> {
    let mut res = s_norm(poly, 1.0, cfg)?;
    res.mode = NormMode::SupNorm;
    Ok(res)
}

/// `(1 - ||x||^2) |P(x)|`, the objective the v-norm maximizes; `x` is
/// expected inside the closed unit ball.
pub fn weighted_objective(poly: &Polynomial, x: &LpVector) -> Result<f64> {
    check_same_space(poly.space(), x.space)?;
    Ok(weighted_objective_slice(poly, &x.coords))
}

pub(crate) fn weighted_objective_slice(poly: &Polynomial, coords: &[Complex64]) -> f64 {
    let n = lp_norm_slice(poly.space().p, coords);
    Weight::Standard.eval_raw(n.min(1.0)) * poly.eval_slice(coords).norm()
}

struct OuterSearch {
    value: f64,
    witness: Vec<Complex64>,
    profile: Vec<f64>,
    iterations: usize,
    restarts_used: usize,
    converged: bool,
    boundary_hit: bool,
}

/// Outer 1-D maximization of `h(s) = (1-s^2) s_norm(P, s)` on `[0, s_hi]`:
/// radial grid, then golden-section refinement of the best cell. Full
/// multi-start runs happen at a few anchor radii; in between, each grid point
/// warm-starts from the neighboring witness direction (the maximizing
/// direction moves continuously in s away from witness jumps, which the
/// anchors catch).
fn weighted_outer_max(poly: &Polynomial, cfg: &OptimizerConfig, s_hi: f64) -> Result<OuterSearch> {
    let space = poly.space();
    let g = cfg.s_grid.max(5);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x7761_7465);
    let mut profile = vec![0.0f64; g];
    let mut iterations = 0usize;
    let mut restarts_used = 0usize;
    let mut converged = false;

    profile[0] = poly
        .eval_slice(&vec![Complex64::new(0.0, 0.0); space.dim])
        .norm();
    let mut best_h = profile[0];
    let mut best_idx = 0usize;
    // track the best witness as (radius, unit direction)
    let mut best_dir: Option<Vec<Complex64>> = None;
    let mut prev_dir: Option<Vec<Complex64>> = None;

    let anchors = [1, g / 3, 2 * g / 3, g - 1];
    for i in 1..g {
        let s = s_hi * i as f64 / (g - 1) as f64;
        let mut bank: Vec<Vec<Complex64>> = Vec::new();
        if anchors.contains(&i) {
            bank = full_direction_bank(poly, cfg, &mut rng);
        }
        if let Some(d) = &prev_dir {
            bank.push(d.clone());
        }
        if let Some(d) = &best_dir {
            bank.push(d.clone());
        }
        let search = sphere_search(poly, s, &bank, cfg.max_iters, cfg.step_tol, false);
        iterations += search.iterations;
        restarts_used += search.restarts_used;
        converged |= search.converged;
        let h = Weight::Standard.eval_raw(s) * search.value;
        profile[i] = h;
        let dir: Vec<Complex64> = {
            let n = lp_norm_slice(space.p, &search.point);
            if n > 0.0 {
                search.point.iter().map(|z| z / n).collect()
            } else {
                search.point.clone()
            }
        };
        if h > best_h {
            best_h = h;
            best_idx = i;
            best_dir = Some(dir.clone());
        }
        prev_dir = Some(dir);
    }

    // refine the winning cell; keep the best witness found along the way
    let step = s_hi / (g - 1) as f64;
    let lo = (best_idx.saturating_sub(1)) as f64 * step;
    let hi = ((best_idx + 1).min(g - 1)) as f64 * step;
    let mut ref_value = best_h;
    let mut ref_witness: Vec<Complex64> = match &best_dir {
        Some(d) => d.iter().map(|z| z * (best_idx as f64 * step)).collect(),
        None => vec![Complex64::new(0.0, 0.0); space.dim],
    };
    let mut ref_s = best_idx as f64 * step;
    if let Some(dir) = best_dir.clone() {
        let mut iter_acc = 0usize;
        let mut runs = 0usize;
        {
            let mut h_eval = |s: f64| -> f64 {
                let bank = vec![dir.clone()];
                let search = sphere_search(poly, s, &bank, cfg.max_iters, cfg.step_tol, false);
                iter_acc += search.iterations;
                runs += 1;
                let h = Weight::Standard.eval_raw(s) * search.value;
                if h > ref_value {
                    ref_value = h;
                    ref_witness = search.point;
                    ref_s = s;
                }
                h
            };
            golden_section_max(&mut h_eval, lo.max(0.0), hi.min(s_hi), 1e-10, 120);
        }
        iterations += iter_acc;
        restarts_used += runs;
    }

    let boundary_hit = s_hi - ref_s < 1e-7 * s_hi.max(1e-12);
    Ok(OuterSearch {
        value: weighted_objective_slice(poly, &ref_witness),
        witness: ref_witness,

        profile,
        iterations,
        restarts_used,
        converged,
        boundary_hit,
    })
}

/// Wirtinger ascent direction of the weighted objective at an interior point:
/// the |P| term pulled back through conj, minus the weight's radial decay.
pub(crate) fn weighted_gradient_slice(poly: &Polynomial, z: &[Complex64]) -> Vec<Complex64> {
    let p = poly.space().p;
    let n = lp_norm_slice(p, z);
    let pv = poly.eval_slice(z);
    let pd = poly.derivative_slice(z);
    let ap = pv.norm();
    let w = Weight::Standard.eval_raw(n.min(1.0));
    let ng = norm_gradient_slice(p, z);
    let mut out = Vec::with_capacity(z.len());
    for i in 0..z.len() {
        let dpi = if ap > 1e-300 {
            pd[i].conj() * pv / ap
        } else {
            pd[i].conj()
        };
        out.push(dpi * w - ng[i] * (2.0 * n * ap));
    }
    out
}

/// Clamp into the open unit ball, leaving interior points untouched.
pub(crate) fn ball_project(p: f64, z: &mut Vec<Complex64>) {
    let n = lp_norm_slice(p, z);
    let cap = 1.0 - 1e-9;
    if n > cap {
        let f = cap / n;
        for zi in z.iter_mut() {
            *zi *= f;
        }
    }
}

/// Direct multi-start ascent of the weighted objective over the open unit
/// ball; the independent cross-check for the outer radial search. Returns the
/// best value together with the point attaining it.
fn ball_search(
    poly: &Polynomial,
    cfg: &OptimizerConfig,
    extra_starts: &[Vec<Complex64>],
) -> Result<(f64, Vec<Complex64>, usize, usize)> {
    let space = poly.space();
    let p = space.p;
    let value = |z: &[Complex64]| weighted_objective_slice(poly, z);
    let gradient = |z: &[Complex64]| weighted_gradient_slice(poly, z);
    let project = |z: &mut Vec<Complex64>| ball_project(p, z);

    let radius = critical_radius(poly.degree().clamp(1, 30))?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x6261_6c6c);
    let dirs = full_direction_bank(poly, cfg, &mut rng);
    let iters = if is_smooth(p) { cfg.max_iters } else { 0 };

    let mut best = f64::NEG_INFINITY;
    let mut best_point = vec![Complex64::new(0.0, 0.0); space.dim];
    let mut iterations = 0usize;
    let mut runs = 0usize;
    let starts = dirs
        .iter()
        .map(|dir| dir.iter().map(|z| z * radius).collect::<Vec<_>>())
        .chain(extra_starts.iter().cloned());
    for start in starts {
        let out = projected_ascent(&value, &gradient, &project, start, iters, cfg.step_tol);
        iterations += out.iterations;
        runs += 1;
        if out.value > best {
            best = out.value;
            best_point = out.point;
        }
    }
    Ok((best, best_point, iterations, runs))
}

/// The weighted norm by the radial formula, restricted to `[0, s_hi]`.
/// Exposed separately so the restriction radius itself can be tested.
pub fn v_norm_on_interval(poly: &Polynomial, cfg: &OptimizerConfig, s_hi: f64) -> Result<NormResult> {
    cfg.validate()?;
    if !(s_hi > 0.0 && s_hi <= 1.0) {
        return Err(Error::OutOfDomain {
            what: "s_hi",
            value: s_hi,
        });
    }
    let space = poly.space();
    if poly.degree() == 0 {
        let witness = LpVector::zero(space);
        let value = weighted_objective_slice(poly, &witness.coords);
        return Ok(NormResult {
            value,
            witness,
            s_star: 0.0,
            mode: NormMode::VNorm,
            diagnostics: Diagnostics {
                converged: true,
                ..Diagnostics::default()
            },
        });
    }

    v_norm_two_method(poly, cfg, s_hi, &[])
}

/// Shared two-method core: outer radial search cross-checked by ball ascent,
/// with optional caller-supplied warm starts fed to the ball phase. Whichever
/// method wins supplies both the witness and the value, so the reported value
/// is exactly the objective at the reported witness.
fn v_norm_two_method(
    poly: &Polynomial,
    cfg: &OptimizerConfig,
    s_hi: f64,
    warm: &[Vec<Complex64>],
) -> Result<NormResult> {
    let space = poly.space();
    let outer = weighted_outer_max(poly, cfg, s_hi)?;
    let mut extra: Vec<Vec<Complex64>> = Vec::with_capacity(warm.len() + 1);
    extra.push(outer.witness.clone());
    extra.extend(warm.iter().cloned());
    let (ball_value, ball_point, ball_iters, ball_runs) = ball_search(poly, cfg, &extra)?;
    let gap = (outer.value - ball_value).abs();
    let method_mismatch = if gap > 1e-6 * outer.value.max(1.0) {
        Some(gap)
    } else {
        None
    };

    let (value, coords) = if ball_value > outer.value {
        (ball_value, ball_point)
    } else {
        (outer.value, outer.witness)
    };
    let witness = LpVector::new(space, coords)?;
    let s_star = witness.norm();
    Ok(NormResult {
        value,
        witness,
        s_star,
        mode: NormMode::VNorm,
        diagnostics: Diagnostics {
            iterations: outer.iterations + ball_iters,
            restarts_used: outer.restarts_used + ball_runs,
            best_per_restart: outer.profile,
            converged: outer.converged,
            method_mismatch,
            boundary_hit: outer.boundary_hit,
        },
    })
}

/// `sup over the open ball of (1 - ||x||^2)|P(x)|`. The outer radial interval
/// is `[0, s(N)]`: beyond s(N) the weight alone caps the objective below the
/// inner maximum, so nothing is lost (and the cross-check would catch it).
pub fn v_norm(poly: &Polynomial, cfg: &OptimizerConfig) -> Result<NormResult> {
    let degree = poly.degree();
    if degree == 0 {
        return v_norm_on_interval(poly, cfg, 0.5);
    }
    let s_hi = s_of_n(degree)?;
    v_norm_on_interval(poly, cfg, s_hi)
}

/// `v_norm` with a warm start: `near` joins the ball-phase starting points,
/// so a maximizer known to sit close to it is found from the first ascent.
/// Used by iterative schemes whose localization argument guarantees the next
/// witness stays near the previous one.
pub fn v_norm_with_start(
    poly: &Polynomial,
    cfg: &OptimizerConfig,
    near: &LpVector,
) -> Result<NormResult> {
    cfg.validate()?;
    check_same_space(poly.space(), near.space)?;
    let degree = poly.degree();
    if degree == 0 {
        return v_norm_on_interval(poly, cfg, 0.5);
    }
    let s_hi = s_of_n(degree)?;
    v_norm_two_method(poly, cfg, s_hi, &[near.coords.clone()])
}

/// Returns the witness plus its recomputed attainment margin
/// `result.value - objective(P, witness)`; the margin is zero for a result
/// fresh out of the optimizer and grows only if P was modified since.
pub fn attainment_witness(poly: &Polynomial, result: &NormResult) -> Result<(LpVector, f64)> {
    check_same_space(poly.space(), result.witness.space)?;
    let objective = match result.mode {
        NormMode::VNorm => weighted_objective_slice(poly, &result.witness.coords),
        NormMode::SNorm(_) | NormMode::SupNorm => poly.eval_slice(&result.witness.coords).norm(),
    };
    Ok((result.witness.clone(), result.value - objective))
}

/// `sup { |P(x) - Q(x)| : ||x|| = 1 }` without forming P - Q structurally.
pub fn sup_diff_norm(a: &Polynomial, b: &Polynomial, cfg: &OptimizerConfig) -> Result<f64> {
    cfg.validate()?;
    check_same_space(a.space(), b.space())?;
    let p = a.space().p;
    let value = |z: &[Complex64]| (a.eval_slice(z) - b.eval_slice(z)).norm();
    let gradient = |z: &[Complex64]| {
        let dv = a.eval_slice(z) - b.eval_slice(z);
        let da = a.derivative_slice(z);
        let db = b.derivative_slice(z);
        let ad = dv.norm();
        (0..z.len())
            .map(|i| {
                let gi = (da[i] - db[i]).conj();
                if ad > 1e-300 {
                    gi * dv / ad
                } else {
                    gi
                }
            })
            .collect()
    };
    let project = move |z: &mut Vec<Complex64>| {
        let n = lp_norm_slice(p, z);
        if n > 0.0 {
            let f = 1.0 / n;
            for zi in z.iter_mut() {
                *zi *= f;
            }
        } else {
            z[0] = Complex64::new(1.0, 0.0);
        }
    };
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x6469_6666);
    let bank = full_direction_bank(a, cfg, &mut rng);
    let iters = if is_smooth(p) { cfg.max_iters } else { 0 };
    let mut best: f64 = 0.0;
    for dir in bank {
        let out = projected_ascent(&value, &gradient, &project, dir, iters, cfg.step_tol);
        if out.value > best {
            best = out.value;
        }
    }
    Ok(best)
}

// ---------------------------------------------------------------------------
// Inequality checks
// ---------------------------------------------------------------------------

/// Both sides of `||P||_s >= C(s) ||P||_inf` with
/// `C(s) = 1 - sum_{n<=N} (1-s^n) n^n/n!`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct LowerBoundReport {
    pub s: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub coefficient: f64,
    pub slack: f64,
}

pub fn check_lower_bound_lemma(
    poly: &Polynomial,
    s: f64,
    cfg: &OptimizerConfig,
) -> Result<LowerBoundReport> {
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::OutOfDomain { what: "s", value: s });
    }
    let degree = poly.degree();
    let coefficient = if degree == 0 {
        1.0
    } else {
        lower_bound_coefficient(s, degree)?
    };
    let lhs = s_norm(poly, s, cfg)?.value;
    let rhs = coefficient * sup_norm(poly, cfg)?.value;
    let slack = lhs - rhs;
    if slack < -1e-8 {
        return Err(Error::InequalityViolated {
            detail: format!(
                "s-norm lower bound failed at s={s}: lhs={lhs} rhs={rhs} slack={slack}"
            ),
        });
    }
    Ok(LowerBoundReport {
        s,
        lhs,
        rhs,
        coefficient,
        slack,
    })
}

/// The two equivalence inequalities at radius `s(alpha, N)`:
/// `||P||_{s(alpha,N)} >= (1-alpha) ||P||_inf` and
/// `||P||_v >= (1 - s(alpha,N)^2)(1-alpha) ||P||_inf`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct EquivalenceReport {
    pub alpha: f64,
    pub s_alpha: f64,
    pub s_norm_value: f64,
    pub sup_value: f64,
    pub v_value: f64,
    pub slack_radial: f64,
    pub slack_weighted: f64,
}

pub fn check_equivalence(
    poly: &Polynomial,
    alpha: f64,
    cfg: &OptimizerConfig,
) -> Result<EquivalenceReport> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::OutOfDomain {
            what: "alpha",
            value: alpha,
        });
    }
    let degree = poly.degree().max(1);
    let s_alpha = s_alpha_n(alpha, degree)?;
    let s_norm_value = s_norm(poly, s_alpha, cfg)?.value;
    let sup_value = sup_norm(poly, cfg)?.value;
    let v_value = v_norm(poly, cfg)?.value;
    let slack_radial = s_norm_value - (1.0 - alpha) * sup_value;
    let slack_weighted = v_value - (1.0 - s_alpha * s_alpha) * (1.0 - alpha) * sup_value;
    if slack_radial < -1e-8 || slack_weighted < -1e-8 {
        return Err(Error::InequalityViolated {
            detail: format!(
                "equivalence failed at alpha={alpha}: radial slack {slack_radial}, weighted slack {slack_weighted}"
            ),
        });
    }
    Ok(EquivalenceReport {
        alpha,
        s_alpha,
        s_norm_value,
        sup_value,
        v_value,
        slack_radial,
        slack_weighted,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::delta_n;
    use crate::polynomial::HomogeneousComponent;
    use crate::space::{Functional, LpSpace};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn test_cfg() -> OptimizerConfig {
        OptimizerConfig {
            restarts: 8,
            max_iters: 500,
            s_grid: 65,
            ..OptimizerConfig::default()
        }
    }

    fn functional_power(space: LpSpace, n: usize, degree: usize) -> Polynomial {
        let mut coords = vec![c(0.0, 0.0); n];
        coords[0] = c(1.0, 0.0);
        let f = Functional::new(space, coords).unwrap();
        Polynomial::new(space, vec![HomogeneousComponent::functional_power(degree, f)]).unwrap()
    }

    fn random_diagonal(space: LpSpace, degree: usize, seed: u64) -> Polynomial {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let coeffs: Vec<Complex64> = (0..space.dim)
            .map(|_| c(rng.gen::<f64>() * 2.0 - 1.0, rng.gen::<f64>() * 2.0 - 1.0))
            .collect();
        Polynomial::new(space, vec![HomogeneousComponent::diagonal(degree, coeffs)]).unwrap()
    }

    #[test]
    fn functional_power_norms_match_hoelder() {
        let space = LpSpace::new(4, 2.0).unwrap();
        let poly = functional_power(space, 4, 3);
        let cfg = test_cfg();
        for s in [0.3, 0.7, 1.0] {
            let res = s_norm(&poly, s, &cfg).unwrap();
            assert!(
                (res.value - s.powi(3)).abs() < 1e-9,
                "s={s}: {} vs {}",
                res.value,
                s.powi(3)
            );
            assert!((res.witness.norm() - s).abs() < 1e-9);
            // witness concentrates on coordinate 1 up to phase
            assert!((res.witness.coords[0].norm() - s).abs() < 1e-6);
        }
        let sup = sup_norm(&poly, &cfg).unwrap();
        assert!((sup.value - 1.0).abs() < 1e-9);
        assert_eq!(sup.mode, NormMode::SupNorm);
    }

    #[test]
    fn constant_polynomial_norms() {
        let space = LpSpace::new(3, 2.0).unwrap();
        let poly = Polynomial::constant(space, c(1.5, -2.0));
        let cfg = test_cfg();
        let want = (1.5f64 * 1.5 + 4.0).sqrt();
        let res = s_norm(&poly, 0.4, &cfg).unwrap();
        assert!((res.value - want).abs() < 1e-12);
        assert!((res.witness.norm() - 0.4).abs() < 1e-9);
        let v = v_norm(&poly, &cfg).unwrap();
        assert!((v.value - want).abs() < 1e-12);
        assert_eq!(v.s_star, 0.0);
        assert!(v.witness.is_zero());
    }

    #[test]
    fn simple_square_v_norm_hits_closed_form() {
        // P = 2 x_1^2: ||P||_s = 2 s^2, ||P||_v = 2 delta_2 = 0.5 at s = 1/sqrt(2)
        let space = LpSpace::new(2, 2.0).unwrap();
        let poly = Polynomial::new(
            space,
            vec![HomogeneousComponent::diagonal(2, vec![c(2.0, 0.0), c(0.0, 0.0)])],
        )
        .unwrap();
        let cfg = test_cfg();
        let v = v_norm(&poly, &cfg).unwrap();
        assert!((v.value - 0.5).abs() < 1e-7, "v={}", v.value);
        assert!((v.s_star - 0.5f64.sqrt()).abs() < 1e-4);
        assert_eq!(v.witness.dominant_index(), 1);
        assert!(v.diagnostics.method_mismatch.is_none());
        assert!(!v.diagnostics.boundary_hit);
        assert!((v.witness.norm() - v.s_star).abs() < 1e-12);
        // value equals objective recomputed at the witness, bit for bit
        let (w, margin) = attainment_witness(&poly, &v).unwrap();
        assert_eq!(margin, 0.0);
        assert!(w.norm() < 1.0);
    }

    #[test]
    fn homogeneous_radial_law() {
        let space = LpSpace::new(4, 2.0).unwrap();
        let cfg = test_cfg();
        for seed in [1u64, 2, 3] {
            let poly = random_diagonal(space, 3, seed);
            let base = s_norm(&poly, 0.5, &cfg).unwrap().value;
            for r in [0.25, 0.75, 1.0] {
                let res = s_norm(&poly, r, &cfg).unwrap().value;
                let expected = (r / 0.5f64).powi(3) * base;
                assert!(
                    (res - expected).abs() < 1e-6 * expected.max(1.0),
                    "seed={seed} r={r}: {res} vs {expected}"
                );
            }
        }
    }

    #[test]
    fn homogeneous_v_norm_is_delta_times_sup() {
        let space = LpSpace::new(4, 2.0).unwrap();
        let cfg = test_cfg();
        for (seed, degree) in [(5u64, 1usize), (6, 2), (7, 3)] {
            let poly = random_diagonal(space, degree, seed);
            let sup = sup_norm(&poly, &cfg).unwrap().value;
            let v = v_norm(&poly, &cfg).unwrap().value;
            let want = delta_n(degree).unwrap() * sup;
            assert!(
                (v - want).abs() < 1e-4 * sup.max(1.0),
                "seed={seed} N={degree}: v={v} want={want}"
            );
        }
    }

    #[test]
    fn mixed_sign_diagonal_finds_phase_flipped_maximum() {
        // two-term diagonal with negative second coefficient: on the e_1 line
        // the true sphere maximum aligns the phases, max_theta |a s^2 e^{2it}
        // + b s^3 e^{3it}| = a s^2 + |b| s^3
        let space = LpSpace::new(2, 2.0).unwrap();
        let poly = Polynomial::new(
            space,
            vec![
                HomogeneousComponent::diagonal(2, vec![c(5.0, 0.0), c(3.0, 0.0)]),
                HomogeneousComponent::diagonal(3, vec![c(-7.0, 0.0), c(-3.0, 0.0)]),
            ],
        )
        .unwrap();
        let cfg = test_cfg();
        let res = s_norm(&poly, 0.5, &cfg).unwrap();
        let want = 5.0 * 0.25 + 7.0 * 0.125; // 2.125, not the sign-blind 0.375
        assert!(
            (res.value - want).abs() < 1e-6,
            "value {} want {want}",
            res.value
        );
        assert_eq!(res.witness.dominant_index(), 1);
    }

    #[test]
    fn determinism_bitwise() {
        let space = LpSpace::new(3, 2.5).unwrap();
        let poly = random_diagonal(space, 2, 11);
        let cfg = test_cfg();
        let a = v_norm(&poly, &cfg).unwrap();
        let b = v_norm(&poly, &cfg).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        assert_eq!(a.s_star.to_bits(), b.s_star.to_bits());
        for (x, y) in a.witness.coords.iter().zip(&b.witness.coords) {
            assert_eq!(x.re.to_bits(), y.re.to_bits());
            assert_eq!(x.im.to_bits(), y.im.to_bits());
        }
        let sa = serde_json::to_string(&a).unwrap();
        let sb = serde_json::to_string(&b).unwrap();
        assert_eq!(sa, sb);
    }

    #[test]
    fn scaling_equivariance() {
        let space = LpSpace::new(3, 2.0).unwrap();
        let poly = random_diagonal(space, 2, 21);
        let scaled = poly.scale_by(3.0).unwrap();
        let cfg = test_cfg();
        let pairs = [
            (
                s_norm(&poly, 0.6, &cfg).unwrap().value,
                s_norm(&scaled, 0.6, &cfg).unwrap().value,
            ),
            (
                sup_norm(&poly, &cfg).unwrap().value,
                sup_norm(&scaled, &cfg).unwrap().value,
            ),
            (
                v_norm(&poly, &cfg).unwrap().value,
                v_norm(&scaled, &cfg).unwrap().value,
            ),
        ];
        for (base, tripled) in pairs {
            assert!(
                (tripled - 3.0 * base).abs() < 1e-8 * (1.0 + 3.0 * base),
                "{tripled} vs 3*{base}"
            );
        }
    }

    #[test]
    fn v_norm_restriction_matches_full_interval() {
        let space = LpSpace::new(3, 2.0).unwrap();
        let cfg = test_cfg();
        for seed in [31u64, 32] {
            let poly = random_diagonal(space, 2, seed);
            let restricted = v_norm(&poly, &cfg).unwrap().value;
            let full = v_norm_on_interval(&poly, &cfg, 1.0).unwrap().value;
            assert!(
                (restricted - full).abs() < 1e-8 * restricted.max(1.0),
                "seed={seed}: {restricted} vs {full}"
            );
        }
    }

    #[test]
    fn v_norm_witness_strictly_interior() {
        let space = LpSpace::new(3, 2.0).unwrap();
        let cfg = test_cfg();
        for seed in [41u64, 42, 43] {
            let poly = random_diagonal(space, 3, seed);
            let v = v_norm(&poly, &cfg).unwrap();
            assert!(v.witness.norm() < 1.0);
            assert!(v.s_star < 1.0);
            assert!((v.witness.norm() - v.s_star).abs() < 1e-9);
        }
    }

    #[test]
    fn sampling_fallback_for_nonsmooth_exponents() {
        for p in [1.0, f64::INFINITY] {
            let space = LpSpace::new(2, p).unwrap();
            let poly = Polynomial::new(
                space,
                vec![HomogeneousComponent::diagonal(1, vec![c(1.0, 0.0), c(0.0, 0.0)])],
            )
            .unwrap();
            let cfg = test_cfg();
            let sup = sup_norm(&poly, &cfg).unwrap();
            assert!((sup.value - 1.0).abs() < 1e-9, "p={p}");
            // outer radial search still pins the v-norm: max (1-s^2)s
            let v = v_norm(&poly, &cfg).unwrap();
            let want = delta_n(1).unwrap();
            assert!((v.value - want).abs() < 1e-6, "p={p}: {} vs {want}", v.value);
        }
    }

    #[test]
    fn lower_bound_lemma_linear_equality_and_random() {
        let space = LpSpace::new(2, 2.0).unwrap();
        let poly = Polynomial::new(
            space,
            vec![HomogeneousComponent::diagonal(1, vec![c(1.0, 0.0), c(0.0, 0.0)])],
        )
        .unwrap();
        let cfg = test_cfg();
        let rep = check_lower_bound_lemma(&poly, 0.5, &cfg).unwrap();
        // linear case: both sides are exactly s * ||P||_inf
        assert!((rep.lhs - 0.5).abs() < 1e-9);
        assert!((rep.rhs - 0.5).abs() < 1e-9);
        assert!(rep.slack.abs() < 1e-8);

        let space6 = LpSpace::new(6, 2.0).unwrap();
        let poly = random_diagonal(space6, 3, 51);
        for i in 1..=5 {
            let s = i as f64 / 6.0;
            let rep = check_lower_bound_lemma(&poly, s, &cfg).unwrap();
            assert!(rep.slack >= -1e-8);
        }
        assert!(check_lower_bound_lemma(&poly, 1.0, &cfg).is_err());
    }

    #[test]
    fn equivalence_inequalities_hold() {
        let space = LpSpace::new(4, 2.0).unwrap();
        let cfg = test_cfg();
        for seed in [61u64, 62] {
            let poly = random_diagonal(space, 2, seed);
            for alpha in [0.1, 0.5, 0.9] {
                let rep = check_equivalence(&poly, alpha, &cfg).unwrap();
                assert!(rep.slack_radial >= -1e-8, "seed={seed} alpha={alpha}");
                assert!(rep.slack_weighted >= -1e-8, "seed={seed} alpha={alpha}");
            }
        }
        let constant = Polynomial::constant(space, c(2.0, 0.0));
        let rep = check_equivalence(&constant, 0.5, &cfg).unwrap();
        assert!(rep.slack_radial >= -1e-8 && rep.slack_weighted >= -1e-8);
        assert!(check_equivalence(&constant, 0.0, &cfg).is_err());
    }

    #[test]
    fn sup_diff_norm_zero_on_equal_and_detects_difference() {
        let space = LpSpace::new(3, 2.0).unwrap();
        let poly = random_diagonal(space, 2, 71);
        let cfg = test_cfg();
        assert_eq!(sup_diff_norm(&poly, &poly, &cfg).unwrap(), 0.0);
        let scaled = poly.scale_by(1.5).unwrap();
        let d = sup_diff_norm(&poly, &scaled, &cfg).unwrap();
        // |P - 1.5 P| = 0.5 |P|, sup over sphere
        let half_sup = 0.5 * sup_norm(&poly, &cfg).unwrap().value;
        assert!((d - half_sup).abs() < 1e-6 * half_sup.max(1.0));
    }

    #[test]
    fn invalid_inputs_rejected() {
        let space = LpSpace::new(2, 2.0).unwrap();
        let poly = random_diagonal(space, 2, 81);
        let cfg = test_cfg();
        assert!(s_norm(&poly, 0.0, &cfg).is_err());
        assert!(s_norm(&poly, 1.5, &cfg).is_err());
        let bad = OptimizerConfig {
            restarts: 0,
            ..OptimizerConfig::default()
        };
        assert!(s_norm(&poly, 0.5, &bad).is_err());
    }
}
