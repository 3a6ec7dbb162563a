//! The property suite behind `wnl verify`. Each check is a named experiment
//! over seeded random data; PASS/FAIL is decided by the stated tolerance and
//! the detail string carries the measured extremes. Everything is driven by
//! the effective seed, so a repeated run is byte-identical.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use wnl_core::bollobas::{
    bollobas_correct, cauchy_monitor, contraction_shrink_violation, lipschitz_estimate,
    normalize_v, BollobasTrace, Mode,
};
use wnl_core::constants::{delta_n, m_n, mu, s_alpha_n, s_of_n};
use wnl_core::counterexamples::{exact_sup_pr, make_fn_power, make_pr, verify_q};
use wnl_core::norms::{
    check_equivalence, check_lower_bound_lemma, s_norm, sup_diff_norm, sup_norm, v_norm,
    v_norm_on_interval, weighted_objective, OptimizerConfig,
};
use wnl_core::polynomial::{HomogeneousComponent, Polynomial, RankOneUpdate};
use wnl_core::space::phase_aligned_dist;
use wnl_core::{
    dist_to_span, duality_functional, modulus_of_convexity, LpSpace, LpVector, Weight,
};

pub type CheckFn = fn(&OptimizerConfig) -> Result<String, String>;

pub const ALL: &[(&str, CheckFn)] = &[
    ("space/norm-axioms", norm_axioms),
    ("space/duality-pairing", duality_pairing),
    ("space/span-distance", span_distance),
    ("space/convexity-modulus", convexity_modulus),
    ("space/weight-shape", weight_shape),
    ("polynomial/precompose-degree", precompose_degree),
    ("polynomial/projection-idempotent", projection_idempotent),
    ("polynomial/contraction-shrink", contraction_shrink),
    ("polynomial/contraction-sup-drift", contraction_sup_drift),
    ("polynomial/lipschitz-bound", lipschitz_bound),
    ("constants/delta-grid-agreement", delta_grid_agreement),
    ("constants/radius-identity", radius_identity),
    ("constants/mu-monotone", mu_monotone),
    ("norms/scaling-equivariance", scaling_equivariance),
    ("norms/homogeneous-radial-law", homogeneous_radial_law),
    ("norms/outer-restriction", outer_restriction),
    ("norms/interior-attainment", interior_attainment),
    ("norms/power-ladder", power_ladder),
    ("norms/lower-bound-lemma", lower_bound_lemma),
    ("norms/equivalence-window", equivalence_window),
    ("counterexamples/pr-witness-direction", pr_witness_direction),
    (
        "counterexamples/pr-closed-form-upper-bound",
        pr_closed_form_upper_bound,
    ),
    (
        "counterexamples/pr-escape-monotonicity",
        pr_escape_monotonicity,
    ),
    ("counterexamples/q-escape", q_escape),
    ("bollobas/sup-drift-bound", sup_drift_bound),
    ("bollobas/vnorm-window", vnorm_window),
    ("bollobas/telescoping", telescoping),
    ("bollobas/final-localization", final_localization),
    ("bollobas/cauchy-monitor", cauchy_monitor_check),
];

fn ce(e: wnl_core::Error) -> String {
    format!("error: {e}")
}

fn rng_for(cfg: &OptimizerConfig, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(cfg.seed ^ salt)
}

fn random_coords(dim: usize, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    (0..dim)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect()
}

fn random_nonzero(space: LpSpace, rng: &mut ChaCha8Rng) -> LpVector {
    loop {
        let v = LpVector::new(space, random_coords(space.dim, rng)).expect("finite coords");
        if v.norm() > 1e-3 {
            return v;
        }
    }
}

/// Uniform direction, radius drawn from (lo, hi).
fn random_in_ball(space: LpSpace, lo: f64, hi: f64, rng: &mut ChaCha8Rng) -> LpVector {
    let v = random_nonzero(space, rng);
    let r = rng.gen_range(lo..hi);
    v.scale(Complex64::new(r / v.norm(), 0.0))
}

fn random_diag_poly(space: LpSpace, degrees: &[usize], rng: &mut ChaCha8Rng) -> Polynomial {
    let components = degrees
        .iter()
        .map(|&k| HomogeneousComponent::diagonal(k, random_coords(space.dim, rng)))
        .collect();
    Polynomial::new(space, components).expect("matching dimensions")
}

/// Diagonal components plus one unit-functional power, exercising both kinds.
fn random_mixed_poly(
    space: LpSpace,
    degrees: &[usize],
    func_degree: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Polynomial, String> {
    let mut components: Vec<HomogeneousComponent> = degrees
        .iter()
        .map(|&k| HomogeneousComponent::diagonal(k, random_coords(space.dim, rng)))
        .collect();
    let dir = random_nonzero(space, rng);
    let f = duality_functional(&dir).map_err(ce)?;
    components.push(HomogeneousComponent::functional_power(func_degree, f));
    Polynomial::new(space, components).map_err(ce)
}

fn add(a: &LpVector, b: &LpVector) -> LpVector {
    let coords = a
        .coords
        .iter()
        .zip(&b.coords)
        .map(|(x, y)| x + y)
        .collect();
    LpVector::new(a.space, coords).expect("finite coords")
}

// ---------------------------------------------------------------------------
// space
// ---------------------------------------------------------------------------

fn norm_axioms(cfg: &OptimizerConfig) -> Result<String, String> {
    let mut rng = rng_for(cfg, 0x6178);
    let mut max_scale_err = 0.0f64;
    let mut max_triangle_excess = 0.0f64;
    for &p in &[1.0, 1.5, 2.0, 3.0, f64::INFINITY] {
        for &dim in &[2usize, 5] {
            let space = LpSpace::new(dim, p).map_err(ce)?;
            if LpVector::zero(space).norm() != 0.0 {
                return Err("zero vector has nonzero norm".into());
            }
            for j in 0..dim {
                let e = LpVector::basis(space, j).map_err(ce)?;
                if (e.norm() - 1.0).abs() > 1e-15 {
                    return Err(format!("basis vector {j} has norm {}", e.norm()));
                }
            }
            for _ in 0..15 {
                let v = random_nonzero(space, &mut rng);
                let w = random_nonzero(space, &mut rng);
                if v.norm() <= 0.0 {
                    return Err("nonzero vector with nonpositive norm".into());
                }
                let c = Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
                let err = (v.scale(c).norm() - c.norm() * v.norm()).abs()
                    / (1.0 + c.norm() * v.norm());
                max_scale_err = max_scale_err.max(err);
                let excess = add(&v, &w).norm() - v.norm() - w.norm();
                max_triangle_excess = max_triangle_excess.max(excess);
            }
        }
    }
    let ok = max_scale_err <= 1e-10 && max_triangle_excess <= 1e-12;
    let detail = format!(
        "p in {{1,1.5,2,3,inf}}: max homogeneity error {max_scale_err:.3e}, \
max triangle excess {max_triangle_excess:.3e}"
    );
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn duality_pairing(cfg: &OptimizerConfig) -> Result<String, String> {
    let mut rng = rng_for(cfg, 0x6475);
    let mut max_pairing_err = 0.0f64;
    let mut max_unit_err = 0.0f64;
    let mut max_bound_excess = 0.0f64;
    for &p in &[1.0, 1.5, 2.0, 4.0, f64::INFINITY] {
        let space = LpSpace::new(4, p).map_err(ce)?;
        for _ in 0..20 {
            let x = random_nonzero(space, &mut rng);
            let f = duality_functional(&x).map_err(ce)?;
            let pairing = f.apply(&x).map_err(ce)?;
            max_pairing_err =
                max_pairing_err.max((pairing - x.norm()).norm() / (1.0 + x.norm()));
            max_unit_err = max_unit_err.max((f.dual_norm() - 1.0).abs());
            let y = random_nonzero(space, &mut rng);
            let excess = f.apply(&y).map_err(ce)?.norm() - y.norm();
            max_bound_excess = max_bound_excess.max(excess / (1.0 + y.norm()));
        }
    }
    let ok = max_pairing_err <= 1e-10 && max_unit_err <= 1e-10 && max_bound_excess <= 1e-10;
    let detail = format!(
        "max |f(x)-|x|| {max_pairing_err:.3e}, max ||f|*-1| {max_unit_err:.3e}, \
max |f(y)|-|y| {max_bound_excess:.3e}"
    );
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn span_distance(cfg: &OptimizerConfig) -> Result<String, String> {
    let mut rng = rng_for(cfg, 0x7370);
    let mut max_over = 0.0f64;
    let mut max_on_span = 0.0f64;
    let mut max_perp_err = 0.0f64;
    for &p in &[1.5, 2.0, 3.0] {
        let space = LpSpace::new(4, p).map_err(ce)?;
        for _ in 0..20 {
            let x = random_nonzero(space, &mut rng);
            let y = random_nonzero(space, &mut rng);
            let d = dist_to_span(&y, &x).map_err(ce)?;
            max_over = max_over.max(d - y.norm() * (1.0 + 1e-12));
            let lam = Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            let on = dist_to_span(&x.scale(lam), &x).map_err(ce)?;
            max_on_span = max_on_span.max(on / (1.0 + lam.norm() * x.norm()));
            if p == 2.0 {
                // orthogonal residual: distance equals the plain norm
                let nx2 = x.norm() * x.norm();
                let inner: Complex64 = y
                    .coords
                    .iter()
                    .zip(&x.coords)
                    .map(|(a, b)| a * b.conj())
                    .sum();
                let perp = add(&y, &x.scale(-inner / nx2));
                let dp = dist_to_span(&perp, &x).map_err(ce)?;
                max_perp_err =
                    max_perp_err.max((dp - perp.norm()).abs() / (1.0 + perp.norm()));
            }
        }
    }
    let ok = max_over <= 1e-12 && max_on_span <= 1e-10 && max_perp_err <= 1e-8;
    let detail = format!(
        "max d(y,x)-|y| {max_over:.3e}, max d(lam x, x) {max_on_span:.3e}, \
max orthogonal residual error {max_perp_err:.3e}"
    );
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn convexity_modulus(cfg: &OptimizerConfig) -> Result<String, String> {
    let mut rng = rng_for(cfg, 0x636f);
    let mut worst_slack = f64::INFINITY;
    let mut skipped = 0usize;
    for &p in &[1.5, 2.0, 3.0] {
        let space = LpSpace::new(3, p).map_err(ce)?;
        // (separation, 1 - |midpoint|) for unit-ball pairs; half random,
        // half on antipodal rays so separations near 2 are represented
        let mut pairs = Vec::with_capacity(10_000);
        for i in 0..10_000 {
            let (x, y) = if i % 2 == 0 {
                (
                    random_in_ball(space, 1e-3, 1.0, &mut rng),
                    random_in_ball(space, 1e-3, 1.0, &mut rng),
                )
            } else {
                let u = random_nonzero(space, &mut rng);
                let unit = u.scale(Complex64::new(1.0 / u.norm(), 0.0));
                let a = rng.gen_range(0.5..1.0);
                let b = rng.gen_range(0.5..1.0);
                (
                    unit.scale(Complex64::new(a, 0.0)),
                    unit.scale(Complex64::new(-b, 0.0)),
                )
            };
            let sep = x.sub(&y).map_err(ce)?.norm();
            let mid = add(&x, &y).scale(Complex64::new(0.5, 0.0)).norm();
            pairs.push((sep, 1.0 - mid));
        }
        for j in 1..=19 {
            let t = j as f64 / 10.0;
            let delta = modulus_of_convexity(space, t).map_err(ce)?;
            let emp = pairs
                .iter()
                .filter(|(sep, _)| *sep >= t)
                .map(|(_, drop)| *drop)
                .fold(f64::INFINITY, f64::min);
            if emp.is_finite() {
                worst_slack = worst_slack.min(emp - delta);
            } else {
                skipped += 1;
            }
        }
    }
    let ok = worst_slack >= -1e-8;
    let detail = format!(
        "empirical midpoint drop minus modulus >= {worst_slack:.3e} \
(10000 pairs per p, {skipped} empty separation bins)"
    );
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn weight_shape(_cfg: &OptimizerConfig) -> Result<String, String> {
    let w = Weight::Standard;
    if w.eval(0.0).map_err(ce)? != 1.0 {
        return Err("w(0) is not exactly 1".into());
    }
    if w.eval(1.0).map_err(ce)? != 0.0 {
        return Err("w(1) is not exactly 0".into());
    }
    let mut prev = f64::INFINITY;
    for i in 0..=1000 {
        let s = i as f64 / 1000.0;
        let val = w.eval(s).map_err(ce)?;
        if !(0.0..=1.0).contains(&val) {
            return Err(format!("w({s}) = {val} leaves [0,1]"));
        }
        if i > 0 && val >= prev {
            return Err(format!("w not strictly decreasing at s = {s}"));
        }
        prev = val;
    }
    if w.eval(-0.1).is_ok() || w.eval(1.1).is_ok() {
        return Err("w accepts arguments outside [0,1]".into());
    }
    Ok("w(0)=1 and w(1)=0 exactly, strictly decreasing on a 1001-point grid".into())
}

// ---------------------------------------------------------------------------
// polynomial
// ---------------------------------------------------------------------------

fn precompose_degree(cfg: &OptimizerConfig) -> Result<String, String> {
    let mut rng = rng_for(cfg, 0x7072);
    let space = LpSpace::new(4, 2.0).map_err(ce)?;
    let mut max_eval_err = 0.0f64;
    for i in 0..10 {
        let poly = if i % 2 == 0 {
            random_diag_poly(space, &[1, 3], &mut rng)
        } else {
            random_mixed_poly(space, &[2], 4, &mut rng)?
        };
        let x = random_in_ball(space, 0.1, 0.9, &mut rng);
        let rho = rng.gen_range(0.01..0.5);
        let t = RankOneUpdate::contraction(rho, &x).map_err(ce)?;
        let composed = poly.precompose(t.clone()).map_err(ce)?;
        if composed.degree() != poly.degree() {
            return Err(format!(
                "degree changed under precompose: {} -> {}",
                poly.degree(),
                composed.degree()
            ));
        }
        for _ in 0..30 {
            let y = random_in_ball(space, 0.0 + 1e-3, 1.0, &mut rng);
            let direct = poly.eval(&t.apply(&y).map_err(ce)?).map_err(ce)?;
            let fused = composed.eval(&y).map_err(ce)?;
            max_eval_err =
                max_eval_err.max((direct - fused).norm() / (1.0 + direct.norm()));
        }
    }
    let ok = max_eval_err <= 1e-10;
    let detail =
        format!("degree stable on 10 polynomials, max |P(Ty) - (P o T)(y)| {max_eval_err:.3e}");
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn projection_idempotent(cfg: &OptimizerConfig) -> Result<String, String> {
    let mut rng = rng_for(cfg, 0x6964);
    let mut max_idem = 0.0f64;
    let mut max_off_span = 0.0f64;
    for &p in &[1.5, 2.0, 3.0] {
        let space = LpSpace::new(4, p).map_err(ce)?;
        for _ in 0..20 {
            let x = random_in_ball(space, 0.1, 0.95, &mut rng);
            let proj = RankOneUpdate::projection(&x).map_err(ce)?;
            let y = random_in_ball(space, 1e-3, 1.0, &mut rng);
            let z = proj.apply(&y).map_err(ce)?;
            let zz = proj.apply(&z).map_err(ce)?;
            max_idem = max_idem.max(zz.sub(&z).map_err(ce)?.norm() / (1.0 + z.norm()));
            max_off_span = max_off_span.max(dist_to_span(&z, &x).map_err(ce)?);
        }
    }
    let ok = max_idem <= 1e-12 && max_off_span <= 1e-10;
    let detail = format!(
        "max |P_x(P_x y) - P_x y| {max_idem:.3e}, max distance of the image \
from span{{x}} {max_off_span:.3e}"
    );
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn contraction_shrink(cfg: &OptimizerConfig) -> Result<String, String> {
    let mut rng = rng_for(cfg, 0x7368);
    let mut worst = f64::NEG_INFINITY;
    for &p in &[1.5, 2.0, 3.0] {
        let space = LpSpace::new(3, p).map_err(ce)?;
        for &rho in &[0.05, 0.25, 0.5] {
            let x = random_in_ball(space, 0.1, 0.9, &mut rng);
            let v = contraction_shrink_violation(&x, rho, cfg.seed ^ 0x7368, 300).map_err(ce)?;
            worst = worst.max(v);
        }
    }
    let ok = worst <= 1e-10;
    let detail = format!(
        "max violation of the contraction shrink bound {worst:.3e} \
(p in {{1.5,2,3}}, rho in {{0.05,0.25,0.5}}, 300 samples each)"
    );
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn contraction_sup_drift(cfg: &OptimizerConfig) -> Result<String, String> {
    let mut rng = rng_for(cfg, 0x6472);
    let space = LpSpace::new(3, 2.0).map_err(ce)?;
    let poly = random_diag_poly(space, &[2], &mut rng);
    let v = v_norm(&poly, cfg).map_err(ce)?;
    let m = m_n(2).map_err(ce)?;
    let mut max_ratio = 0.0f64;
    for &rho in &[0.1, 0.01] {
        let t = RankOneUpdate::contraction(rho, &v.witness).map_err(ce)?;
        let composed = poly.precompose(t).map_err(ce)?;
        let drift = sup_diff_norm(&poly, &composed, cfg).map_err(ce)?;
        let bound = rho * v.value * m / 2.0;
        if drift > bound * (1.0 + 1e-8) + 1e-9 {
            return Err(format!(
                "sup drift {drift:.6e} exceeds rho*v*M/2 = {bound:.6e} at rho = {rho}"
            ));
        }
        max_ratio = max_ratio.max(drift / bound);
    }
    Ok(format!(
        "sup drift stays below rho*v*M/2; largest drift/bound ratio {max_ratio:.3e}"
    ))
}

fn lipschitz_bound(cfg: &OptimizerConfig) -> Result<String, String> {
    let mut rng = rng_for(cfg, 0x6c69);
    let space = LpSpace::new(3, 2.0).map_err(ce)?;
    let poly = random_diag_poly(space, &[1, 2], &mut rng);
    let v = v_norm(&poly, cfg).map_err(ce)?;
    let m = m_n(poly.degree()).map_err(ce)?;
    let cap = v.value * m / 4.0;
    let measured_lip = lipschitz_estimate(&poly, cfg).map_err(ce)?;
    let mut max_pair_rate = 0.0f64;
    for _ in 0..2000 {
        let y = random_in_ball(space, 1e-3, 1.0, &mut rng);
        let z = random_in_ball(space, 1e-3, 1.0, &mut rng);
        let gap = y.sub(&z).map_err(ce)?.norm();
        if gap < 1e-9 {
            continue;
        }
        let diff = (poly.eval(&y).map_err(ce)? - poly.eval(&z).map_err(ce)?).norm();
        if diff > cap * gap * (1.0 + 1e-8) + 1e-12 {
            return Err(format!(
                "|P(y)-P(z)| = {diff:.6e} breaks the v*M/4 Lipschitz cap over gap {gap:.3e}"
            ));
        }
        max_pair_rate = max_pair_rate.max(diff / gap);
    }
    Ok(format!(
        "2000 pairs below the v*M/4 cap; steepest pair rate {max_pair_rate:.6}, \
gradient-based estimate {measured_lip:.6}, cap {cap:.6}"
    ))
}

// ---------------------------------------------------------------------------
// constants
// ---------------------------------------------------------------------------

/// Maximize g on [lo, hi] by golden-section; g must be unimodal there.
fn golden_max(g: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let phi = (5.0f64.sqrt() - 1.0) / 2.0;
    let mut a = hi - phi * (hi - lo);
    let mut b = lo + phi * (hi - lo);
    let mut ga = g(a);
    let mut gb = g(b);
    for _ in 0..120 {
        if ga < gb {
            lo = a;
            a = b;
            ga = gb;
            b = lo + phi * (hi - lo);
            gb = g(b);
        } else {
            hi = b;
            b = a;
            gb = ga;
            a = hi - phi * (hi - lo);
            ga = g(a);
        }
    }
    ga.max(gb)
}

fn delta_grid_agreement(_cfg: &OptimizerConfig) -> Result<String, String> {
    let mut max_dev = 0.0f64;
    for n in 1..=30usize {
        let g = |r: f64| (1.0 - r * r) * r.powi(n as i32);
        let grid = 1_000_000usize;
        let mut best = 0.0f64;
        let mut best_i = 0usize;
        for i in 0..=grid {
            let val = g(i as f64 / grid as f64);
            if val > best {
                best = val;
                best_i = i;
            }
        }
        let lo = (best_i.saturating_sub(1)) as f64 / grid as f64;
        let hi = ((best_i + 1).min(grid)) as f64 / grid as f64;
        let refined = best.max(golden_max(g, lo, hi));
        let dev = (delta_n(n).map_err(ce)? - refined).abs();
        max_dev = max_dev.max(dev);
    }
    if max_dev > 1e-9 {
        return Err(format!(
            "closed form drifts {max_dev:.3e} from the refined grid maximum"
        ));
    }
    let exact2 = (delta_n(2).map_err(ce)? - 0.25).abs();
    if exact2 > 1e-12 {
        return Err(format!("delta_2 misses 1/4 by {exact2:.3e}"));
    }
    Ok(format!(
        "N = 1..30 against a 1e6-point grid plus golden refinement: \
max deviation {max_dev:.3e}; delta_2 hits 1/4 to {exact2:.1e}"
    ))
}

fn radius_identity(_cfg: &OptimizerConfig) -> Result<String, String> {
    let mut max_resid = 0.0f64;
    for n in 1..=8usize {
        let fact: f64 = (1..=n).product::<usize>() as f64;
        let pw = (n as f64).powi(n as i32 + 1);
        let mut prev = f64::INFINITY;
        for j in 1..=20 {
            let alpha = j as f64 / 21.0;
            let s = s_alpha_n(alpha, n).map_err(ce)?;
            if !(0.0 < s && s < 1.0) {
                return Err(format!("s({alpha},{n}) = {s} leaves (0,1)"));
            }
            if s >= prev {
                return Err(format!("s(alpha,{n}) fails to decrease at alpha = {alpha}"));
            }
            prev = s;
            // the defining identity, tested in product form to dodge the
            // N^(N+1)/N! blow-up
            let resid = (s.powi(n as i32) - (1.0 - alpha * fact / pw)).abs();
            max_resid = max_resid.max(resid);
        }
    }
    if max_resid > 1e-12 {
        return Err(format!("defining identity residual {max_resid:.3e}"));
    }
    Ok(format!(
        "s(alpha,N)^N matches its defining identity to {max_resid:.3e} \
and decreases in alpha (N = 1..8, 20 alphas)"
    ))
}

fn mu_monotone(_cfg: &OptimizerConfig) -> Result<String, String> {
    for &p in &[1.5, 2.0, 3.0] {
        let space = LpSpace::new(2, p).map_err(ce)?;
        let mut prev = 0.0f64;
        for i in 1..=1000 {
            let rho = i as f64 / 2000.0;
            let m = mu(rho, space).map_err(ce)?;
            if m <= prev {
                return Err(format!("mu not strictly increasing at rho = {rho}, p = {p}"));
            }
            if m >= rho * rho {
                return Err(format!("mu({rho}) = {m:.3e} reaches rho^2 at p = {p}"));
            }
            prev = m;
        }
    }
    Ok("strictly increasing and below rho^2 on 1000-point grids, p in {1.5,2,3}".into())
}

// ---------------------------------------------------------------------------
// norms
// ---------------------------------------------------------------------------

fn scaling_equivariance(cfg: &OptimizerConfig) -> Result<String, String> {
    let mut rng = rng_for(cfg, 0x7363);
    let space = LpSpace::new(3, 2.0).map_err(ce)?;
    let mut max_rel = 0.0f64;
    let mut max_margin = 0.0f64;
    for _ in 0..2 {
        let poly = random_diag_poly(space, &[1, 2], &mut rng);
        for &alpha in &[0.5, 3.0] {
            let scaled = poly.scale_by(alpha).map_err(ce)?;
            let pairs = [
                (
                    s_norm(&poly, 0.7, cfg).map_err(ce)?,
                    s_norm(&scaled, 0.7, cfg).map_err(ce)?,
                ),
                (
                    sup_norm(&poly, cfg).map_err(ce)?,
                    sup_norm(&scaled, cfg).map_err(ce)?,
                ),
                (
                    v_norm(&poly, cfg).map_err(ce)?,
                    v_norm(&scaled, cfg).map_err(ce)?,
                ),
            ];
            for (base, big) in &pairs {
                let rel = (big.value - alpha * base.value).abs() / (alpha * base.value);
                max_rel = max_rel.max(rel);
            }
            let (_, v_scaled) = (&pairs[2].0, &pairs[2].1);
            let margin = (v_scaled.value
                - weighted_objective(&scaled, &v_scaled.witness).map_err(ce)?)
            .abs();
            max_margin = max_margin.max(margin);
        }
    }
    let ok = max_rel <= 1e-8 && max_margin <= 1e-12;
    let detail = format!(
        "|norm(aP) - a norm(P)| / a norm(P) <= {max_rel:.3e} across s/sup/v; \
witness objective re-evaluates to the value within {max_margin:.3e}"
    );
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn homogeneous_radial_law(cfg: &OptimizerConfig) -> Result<String, String> {
    let mut rng = rng_for(cfg, 0x7261);
    let space = LpSpace::new(4, 2.0).map_err(ce)?;
    let poly = random_diag_poly(space, &[3], &mut rng);
    let mut max_rel = 0.0f64;
    for &(s, r) in &[(0.3, 0.9), (0.5, 1.0), (0.25, 0.75)] {
        let num = s_norm(&poly, s, cfg).map_err(ce)?.value;
        let den = s_norm(&poly, r, cfg).map_err(ce)?.value;
        let rel = (num / den - (s / r).powi(3)).abs() / (s / r).powi(3);
        max_rel = max_rel.max(rel);
    }
    if max_rel > 1e-6 {
        return Err(format!(
            "degree-3 homogeneous norms break the (s/r)^3 radial law by {max_rel:.3e}"
        ));
    }
    Ok(format!(
        "sphere norms of a degree-3 homogeneous polynomial obey the (s/r)^3 \
law to {max_rel:.3e}"
    ))
}

fn suite_polys(cfg: &OptimizerConfig, salt: u64, count: usize) -> Result<Vec<Polynomial>, String> {
    let mut rng = rng_for(cfg, salt);
    let space = LpSpace::new(4, 2.0).map_err(ce)?;
    let mut polys = Vec::with_capacity(count);
    for i in 0..count {
        let poly = if i % 3 == 2 {
            random_mixed_poly(space, &[1], 3, &mut rng)?
        } else {
            random_diag_poly(space, &[1, 2, 3], &mut rng)
        };
        polys.push(poly);
    }
    Ok(polys)
}

fn outer_restriction(cfg: &OptimizerConfig) -> Result<String, String> {
    let mut max_diff = 0.0f64;
    for poly in suite_polys(cfg, 0x6f75, 6)? {
        let full = v_norm_on_interval(&poly, cfg, 1.0).map_err(ce)?;
        let restricted = v_norm(&poly, cfg).map_err(ce)?;
        let diff = (full.value - restricted.value).abs() / full.value.max(1.0);
        max_diff = max_diff.max(diff);
    }
    if max_diff > 1e-8 {
        return Err(format!(
            "restricting the outer search to s(N) loses {max_diff:.3e}"
        ));
    }
    Ok(format!(
        "outer search over [0,1] and [0,s(N)] agree to {max_diff:.3e} on 6 polynomials"
    ))
}

fn interior_attainment(cfg: &OptimizerConfig) -> Result<String, String> {
    let mut max_radius_excess = f64::NEG_INFINITY;
    let mut max_margin = 0.0f64;
    for poly in suite_polys(cfg, 0x6961, 6)? {
        let res = v_norm(&poly, cfg).map_err(ce)?;
        if res.value <= 0.0 {
            return Err("nonzero polynomial with nonpositive weighted norm".into());
        }
        let cap = s_of_n(poly.degree()).map_err(ce)?;
        max_radius_excess = max_radius_excess.max(res.witness.norm() - cap);
        let margin =
            (res.value - weighted_objective(&poly, &res.witness).map_err(ce)?).abs();
        max_margin = max_margin.max(margin);
    }
    let ok = max_radius_excess <= 1e-6 && max_margin <= 1e-12;
    let detail = format!(
        "witness radius stays within s(N) (worst excess {max_radius_excess:.3e}); \
value re-evaluates at the witness within {max_margin:.3e}"
    );
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn power_ladder(cfg: &OptimizerConfig) -> Result<String, String> {
    let space = LpSpace::new(3, 2.0).map_err(ce)?;
    let f = duality_functional(&LpVector::basis(space, 0).map_err(ce)?).map_err(ce)?;
    let mut prev = f64::INFINITY;
    let mut max_dev = 0.0f64;
    for n in 1..=8usize {
        let poly = make_fn_power(&f, n).map_err(ce)?;
        let sup = sup_norm(&poly, cfg).map_err(ce)?.value;
        if (sup - 1.0).abs() > 1e-6 {
            return Err(format!("sup of the degree-{n} power is {sup}, want 1"));
        }
        let ratio = v_norm(&poly, cfg).map_err(ce)?.value / sup;
        max_dev = max_dev.max((ratio - delta_n(n).map_err(ce)?).abs());
        if ratio >= prev {
            return Err(format!("v/sup ratio fails to decrease at N = {n}"));
        }
        prev = ratio;
    }
    if max_dev > 1e-6 {
        return Err(format!("v/sup drifts {max_dev:.3e} from delta_N"));
    }
    Ok(format!(
        "v/sup of unit-functional powers matches delta_N to {max_dev:.3e} \
and decreases, N = 1..8"
    ))
}

fn lower_bound_lemma(cfg: &OptimizerConfig) -> Result<String, String> {
    let mut min_slack = f64::INFINITY;
    let mut count = 0usize;
    for poly in suite_polys(cfg, 0x6c62, 8)? {
        for j in 1..=6 {
            let s = j as f64 / 7.0;
            let rep = check_lower_bound_lemma(&poly, s, cfg).map_err(ce)?;
            min_slack = min_slack.min(rep.slack);
            count += 1;
        }
    }
    if min_slack < -1e-8 {
        return Err(format!(
            "lower bound violated by {:.3e} over {count} cases",
            -min_slack
        ));
    }
    Ok(format!(
        "{count} polynomial/s pairs, minimum slack {min_slack:.3e}"
    ))
}

fn equivalence_window(cfg: &OptimizerConfig) -> Result<String, String> {
    let mut min_slack = f64::INFINITY;
    let mut count = 0usize;
    for poly in suite_polys(cfg, 0x6571, 6)? {
        for j in 1..=5 {
            let alpha = j as f64 / 6.0;
            let rep = check_equivalence(&poly, alpha, cfg).map_err(ce)?;
            min_slack = min_slack.min(rep.slack_radial.min(rep.slack_weighted));
            count += 1;
        }
    }
    if min_slack < -1e-8 {
        return Err(format!(
            "equivalence violated by {:.3e} over {count} cases",
            -min_slack
        ));
    }
    Ok(format!(
        "{count} polynomial/alpha pairs, minimum slack {min_slack:.3e}"
    ))
}

// ---------------------------------------------------------------------------
// counterexamples
// ---------------------------------------------------------------------------

fn pr_witness_direction(cfg: &OptimizerConfig) -> Result<String, String> {
    let poly = make_pr(2.0, 2, 0.9, 32).map_err(ce)?;
    let s = 0.45;
    let res = s_norm(&poly, s, cfg).map_err(ce)?;
    let target = LpVector::basis(poly.space(), 0)
        .map_err(ce)?
        .scale(Complex64::new(s, 0.0));
    let dist = phase_aligned_dist(&res.witness, &target).map_err(ce)?;
    if dist > 1e-4 {
        return Err(format!(
            "sphere maximizer sits {dist:.3e} from the first coordinate ray"
        ));
    }
    Ok(format!(
        "sphere maximizer at s = {s} lies on the first coordinate ray \
(phase-aligned distance {dist:.3e})"
    ))
}

fn pr_closed_form_upper_bound(cfg: &OptimizerConfig) -> Result<String, String> {
    let poly = make_pr(2.0, 2, 0.9, 32).map_err(ce)?;
    let mut max_excess = f64::NEG_INFINITY;
    let mut at = 0.0f64;
    for j in 1..=9 {
        let s = j as f64 / 10.0;
        let numeric = s_norm(&poly, s, cfg).map_err(ce)?.value;
        let (exact, _) = exact_sup_pr(s, 0.9, 2).map_err(ce)?;
        if numeric - exact > max_excess {
            max_excess = numeric - exact;
            at = s;
        }
    }
    if max_excess > 1e-9 {
        return Err(format!(
            "numeric sphere norm exceeds the advertised closed form by \
{max_excess:.6} at s = {at} (phase flips on the sign pattern beat the \
aligned expansion)"
        ));
    }
    Ok(format!(
        "numeric sphere norms stay below the closed form, worst excess {max_excess:.3e}"
    ))
}

fn pr_escape_monotonicity(cfg: &OptimizerConfig) -> Result<String, String> {
    let claimed = 2.0f64;
    let mut gaps = Vec::new();
    for &n in &[16usize, 32, 64] {
        let poly = make_pr(2.0, 2, 0.9, n).map_err(ce)?;
        let numeric = s_norm(&poly, 1.0, cfg).map_err(ce)?.value;
        gaps.push((n, claimed - numeric));
    }
    for &(n, gap) in &gaps {
        if !(gap > 0.0 && gap <= claimed / n as f64) {
            return Err(format!(
                "truncation gap at the escape radius must sit in (0, 2/n]; \
n = {n} gives {gap:.6}"
            ));
        }
    }
    for w in gaps.windows(2) {
        let ratio = w[1].1 / w[0].1;
        if (ratio - 0.5).abs() > 0.1 {
            return Err(format!(
                "doubling the truncation scales the gap by {ratio:.3}, want about 1/2"
            ));
        }
    }
    Ok(format!(
        "gaps {:?} shrink like 1/n across n = 16, 32, 64",
        gaps.iter().map(|(_, g)| *g).collect::<Vec<_>>()
    ))
}

fn q_escape(cfg: &OptimizerConfig) -> Result<String, String> {
    let report = verify_q(2.0, 2, 24, cfg).map_err(ce)?;
    let failing: Vec<&str> = report
        .clauses
        .iter()
        .filter(|c| !c.passed)
        .map(|c| c.name.as_str())
        .collect();
    if !failing.is_empty() {
        return Err(format!("clauses failed: {}", failing.join(", ")));
    }
    Ok(format!(
        "{} clauses hold (sup attained at a basis ray, interior radii escape \
to the last coordinate)",
        report.clauses.len()
    ))
}

// ---------------------------------------------------------------------------
// bollobas
// ---------------------------------------------------------------------------

struct RunArtifacts {
    eps: f64,
    trace: BollobasTrace,
}

fn practical_run(cfg: &OptimizerConfig) -> Result<RunArtifacts, String> {
    let mut rng = rng_for(cfg, 0x626f);
    let space = LpSpace::new(4, 2.0).map_err(ce)?;
    let raw = random_diag_poly(space, &[1, 2], &mut rng);
    let poly = normalize_v(&raw, cfg).map_err(ce)?;
    let x = v_norm(&poly, cfg).map_err(ce)?.witness;
    let mode = Mode::practical_for(&poly, cfg).map_err(ce)?;
    let eps = 0.1;
    let (_, _, trace) = bollobas_correct(&poly, &x, eps, &mode, cfg).map_err(ce)?;
    Ok(RunArtifacts { eps, trace })
}

fn faithful_run(cfg: &OptimizerConfig) -> Result<RunArtifacts, String> {
    let space = LpSpace::new(3, 2.0).map_err(ce)?;
    let f = duality_functional(&LpVector::basis(space, 0).map_err(ce)?).map_err(ce)?;
    let raw = make_fn_power(&f, 2).map_err(ce)?;
    let poly = normalize_v(&raw, cfg).map_err(ce)?;
    let x = v_norm(&poly, cfg).map_err(ce)?.witness;
    let eps = 0.05;
    let (_, _, trace) =
        bollobas_correct(&poly, &x, eps, &Mode::Faithful, cfg).map_err(ce)?;
    Ok(RunArtifacts { eps, trace })
}

fn sup_drift_bound(cfg: &OptimizerConfig) -> Result<String, String> {
    let mut max_ratio = 0.0f64;
    let mut rows = 0usize;
    for (run, slack) in [(practical_run(cfg)?, 1e-9), (faithful_run(cfg)?, 1e-10)] {
        for row in &run.trace.rows {
            rows += 1;
            if row.sup_drift > row.drift_bound * (1.0 + 1e-8) + slack {
                return Err(format!(
                    "iteration {} drifts {:.6e} past its bound {:.6e}",
                    row.n, row.sup_drift, row.drift_bound
                ));
            }
            if row.drift_bound > 0.0 {
                max_ratio = max_ratio.max(row.sup_drift / row.drift_bound);
            }
        }
    }
    Ok(format!(
        "every correction step ({rows} rows over practical and faithful runs) \
stays below rho*v*M/2; largest drift/bound ratio {max_ratio:.3e}"
    ))
}

fn vnorm_window(cfg: &OptimizerConfig) -> Result<String, String> {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for run in [practical_run(cfg)?, faithful_run(cfg)?] {
        for row in &run.trace.rows {
            lo = lo.min(row.v_norm);
            hi = hi.max(row.v_norm);
            if !(0.5 < row.v_norm && row.v_norm < 2.0) {
                return Err(format!(
                    "iteration {} leaves the (1/2, 2) window with v = {}",
                    row.n, row.v_norm
                ));
            }
        }
    }
    Ok(format!(
        "per-iteration weighted norms stay inside (1/2, 2): range [{lo:.6}, {hi:.6}]"
    ))
}

fn telescoping(cfg: &OptimizerConfig) -> Result<String, String> {
    let mut details = Vec::new();
    for (label, run) in [
        ("practical", practical_run(cfg)?),
        ("faithful", faithful_run(cfg)?),
    ] {
        let fin = run
            .trace
            .final_record
            .as_ref()
            .ok_or_else(|| format!("{label} run produced no final record"))?;
        let budget: f64 = run.trace.rows.iter().map(|r| r.drift_bound).sum();
        if budget > run.eps * (1.0 + 1e-9) + 1e-9 {
            return Err(format!(
                "{label}: step budget {budget:.6e} exceeds eps = {}",
                run.eps
            ));
        }
        if fin.sup_dist > budget + 1e-6 {
            return Err(format!(
                "{label}: final sup distance {:.6e} exceeds the telescoped \
budget {budget:.6e}",
                fin.sup_dist
            ));
        }
        if fin.margin > 1e-6 {
            return Err(format!(
                "{label}: corrected polynomial misses attainment by {:.3e}",
                fin.margin
            ));
        }
        if !fin.within_initial_tube {
            return Err(format!("{label}: endpoint left the first-step tube"));
        }
        details.push(format!(
            "{label} sup distance {:.3e} <= budget {:.3e} <= eps {}",
            fin.sup_dist, budget, run.eps
        ));
    }
    Ok(details.join("; "))
}

fn final_localization(cfg: &OptimizerConfig) -> Result<String, String> {
    // below rho ~ 1e-6 the quadratic transverse drop sinks under float
    // noise, so the certificate is only demanded where it is decidable
    let mut checked = 0usize;
    let mut total = 0usize;
    let mut endpoint = Vec::new();
    for (label, run) in [
        ("practical", practical_run(cfg)?),
        ("faithful", faithful_run(cfg)?),
    ] {
        let fin = run
            .trace
            .final_record
            .as_ref()
            .ok_or_else(|| format!("{label} run produced no final record"))?;
        if fin.dist_to_span_x > run.eps + 1e-9 {
            return Err(format!(
                "{label}: final point sits {:.6e} from the starting ray, eps = {}",
                fin.dist_to_span_x, run.eps
            ));
        }
        for row in &run.trace.rows {
            total += 1;
            if row.rho < 1e-6 {
                continue;
            }
            checked += 1;
            if !row.localization.holds {
                return Err(format!(
                    "{label}: weighted mass is not localized at step {} \
(rho = {:.3e}): lhs {:.12} vs rhs {:.12}",
                    row.n, row.rho, row.localization.lhs, row.localization.rhs
                ));
            }
        }
        endpoint.push(format!("{label} endpoint distance {:.3e}", fin.dist_to_span_x));
    }
    Ok(format!(
        "localized at every decidable step ({checked} of {total} rows had \
rho >= 1e-6); {}",
        endpoint.join(", ")
    ))
}

fn cauchy_monitor_check(cfg: &OptimizerConfig) -> Result<String, String> {
    let mut rng = rng_for(cfg, 0x6361);
    let space = LpSpace::new(4, 2.0).map_err(ce)?;
    let raw = random_diag_poly(space, &[2], &mut rng);
    let poly = normalize_v(&raw, cfg).map_err(ce)?;
    let x = v_norm(&poly, cfg).map_err(ce)?.witness;
    let mode = Mode::practical_for(&poly, cfg).map_err(ce)?;
    // a finer step floor stretches the schedule into a real trajectory
    let mut fine = *cfg;
    fine.step_tol = 1e-14;
    let (_, _, trace) =
        bollobas_correct(&poly, &x, 0.1, &mode, &fine).map_err(ce)?;
    if trace.rows.len() < 3 {
        return Err(format!(
            "schedule produced only {} steps; nothing to monitor",
            trace.rows.len()
        ));
    }
    let report = cauchy_monitor(&trace).map_err(ce)?;
    if report.converged_to_zero {
        return Err("iterates collapsed to zero".into());
    }
    Ok(format!(
        "{} iterates stay Cauchy under the tube-sum bound (r_min {:.6}, \
{} increments)",
        trace.rows.len(),
        report.r_min,
        report.increments.len()
    ))
}
