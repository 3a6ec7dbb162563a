//! Closed-form and semi-explicit constants of the weighted-norm theory.
//!
//! Everything here is a pure function of small integers and a space; the
//! tests cross-check each closed form against a brute-force oracle. Degrees
//! are capped at 30: the n^n/n! terms grow like e^n and the constants become
//! astronomically conservative long before f64 range is an issue.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::optimize::{bisect_increasing, golden_section_max};
use crate::space::{modulus_of_convexity, LpSpace};

pub const MAX_DEGREE: usize = 30;

fn check_degree(n: usize) -> Result<()> {
    if n == 0 || n > MAX_DEGREE {
        return Err(Error::OutOfDomain {
            what: "degree",
            value: n as f64,
        });
    }
    Ok(())
}

/// k^k/k! for k = 1..=n, built by the overflow-free recurrence
/// t_{k+1} = t_k (1 + 1/k)^k.
fn power_over_factorial(n: usize) -> Vec<f64> {
    let mut terms = Vec::with_capacity(n);
    let mut t = 1.0f64;
    terms.push(t);
    for k in 1..n {
        t *= (1.0 + 1.0 / k as f64).powi(k as i32);
        terms.push(t);
    }
    terms
}

/// `sup_{r in [0,1]} (r^n - r^{n+2})`, in closed form.
pub fn delta_n(n: usize) -> Result<f64> {
    check_degree(n)?;
    let q = n as f64 / (n as f64 + 2.0);
    Ok(q.powf(n as f64 / 2.0) - q.powf((n as f64 + 2.0) / 2.0))
}

/// The radius where `r^n - r^{n+2}` peaks.
pub fn critical_radius(n: usize) -> Result<f64> {
    check_degree(n)?;
    Ok((n as f64 / (n as f64 + 2.0)).sqrt())
}

/// `C(s) = 1 - sum_{k=1}^n (1 - s^k) k^k/k!`, the factor with
/// `||P||_s >= C(s) ||P||_inf` for polynomials of degree at most n.
/// Strictly increasing in s, equal to 1 at s = 1.
pub fn lower_bound_coefficient(s: f64, n: usize) -> Result<f64> {
    check_degree(n)?;
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::OutOfDomain { what: "s", value: s });
    }
    let mut acc = 1.0f64;
    for (k, t) in power_over_factorial(n).iter().enumerate() {
        acc -= (1.0 - s.powi(k as i32 + 1)) * t;
    }
    Ok(acc)
}

/// `s(alpha, n) = (1 - alpha n!/n^{n+1})^{1/n}`; beyond this radius the
/// s-norm controls the sup-norm with factor 1 - alpha.
pub fn s_alpha_n(alpha: f64, n: usize) -> Result<f64> {
    check_degree(n)?;
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::OutOfDomain {
            what: "alpha",
            value: alpha,
        });
    }
    // n!/n^{n+1} as a product of ratios <= 1, no overflow
    let nf = n as f64;
    let ratio: f64 = (1..=n).map(|k| k as f64 / nf).product::<f64>() / nf;
    Ok((1.0 - alpha * ratio).powf(1.0 / nf))
}

/// Outcome of the search for the localization radius.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SRadius {
    /// the radius itself, strictly inside (argmax, 1)
    pub s: f64,
    /// argmax of f(s) = (1 - s^2) C(s)
    pub argmax: f64,
    /// f(argmax) > 0
    pub max_value: f64,
}

/// Finds the radius `s(n) in (0,1)` beyond which the weight alone caps the
/// weighted s-norm below the inner maximum of `f(s) = (1-s^2) C(s)`: the
/// smallest s with `1 - s^2 <= max f`, nudged up by 1e-9 (and kept below 1)
/// so the inequality is strict.
///
/// C is negative on most of [0,1) for large n, so the argmax is located by
/// first bisecting for the root of C and then searching the sliver where C
/// is positive.
pub fn s_of_n_detail(n: usize) -> Result<SRadius> {
    check_degree(n)?;
    let terms = power_over_factorial(n);
    let coeff = |s: f64| -> f64 {
        let mut acc = 1.0f64;
        for (k, t) in terms.iter().enumerate() {
            acc -= (1.0 - s.powi(k as i32 + 1)) * t;
        }
        acc
    };
    // (1-s)(1+s) keeps precision when the positive window hugs s = 1
    let f = |s: f64| (1.0 - s) * (1.0 + s) * coeff(s);

    // C(0) = 1 - sum k^k/k! <= 0 and C(1) = 1, so the root exists.
    let s_root = bisect_increasing(&coeff, 0.0, 1.0, 200);

    let npts = 2048usize;
    let width = 1.0 - s_root;
    let mut best_i = 0usize;
    let mut best_v = f64::NEG_INFINITY;
    for i in 0..=npts {
        let s = s_root + width * i as f64 / npts as f64;
        let v = f(s);
        if v > best_v {
            best_v = v;
            best_i = i;
        }
    }
    let lo = s_root + width * best_i.saturating_sub(1) as f64 / npts as f64;
    let hi = s_root + width * (best_i + 1).min(npts) as f64 / npts as f64;
    let (argmax, max_value) = golden_section_max(f, lo, hi, 1e-10, 200);
    let max_value = max_value.max(best_v);
    if max_value <= 0.0 {
        return Err(Error::NonPositiveMax { n });
    }

    let base = (1.0 - max_value).sqrt();
    let mut s = base + 1e-9;
    if s >= 1.0 {
        // the window is microscopic; halve the gap to 1 instead of the bump
        s = 0.5 * (base + 1.0);
    }
    Ok(SRadius {
        s,
        argmax,
        max_value,
    })
}

pub fn s_of_n(n: usize) -> Result<f64> {
    Ok(s_of_n_detail(n)?.s)
}

/// `M_n = 8 (1 - s(1/2,n)^2)^{-1} sum_{k=1}^n 2^{2k-1} k^k/k!`, the
/// degree-n Lipschitz-type constant.
pub fn m_n(n: usize) -> Result<f64> {
    check_degree(n)?;
    let s_half = s_alpha_n(0.5, n)?;
    let sum: f64 = power_over_factorial(n)
        .iter()
        .enumerate()
        .map(|(k, t)| 0.5 * 4.0f64.powi(k as i32 + 1) * t)
        .sum();
    Ok(8.0 / ((1.0 - s_half) * (1.0 + s_half)) * sum)
}

/// `mu(rho) = rho^2 delta(2 rho^2)^2 / 16`: how far inside the ball a point
/// must sit, relative to distance rho from a line, for the contraction step
/// to make progress.
pub fn mu(rho: f64, space: LpSpace) -> Result<f64> {
    if !(0.0..=1.0).contains(&rho) {
        return Err(Error::OutOfDomain {
            what: "rho",
            value: rho,
        });
    }
    let d = modulus_of_convexity(space, 2.0 * rho * rho)?;
    Ok(rho * rho * d * d / 16.0)
}

/// `eta(eps) = mu(eps / (2 M_n))`, the attainment margin that triggers one
/// correction round for degree-n polynomials.
pub fn eta(eps: f64, n: usize, space: LpSpace) -> Result<f64> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::OutOfDomain {
            what: "eps",
            value: eps,
        });
    }
    mu(eps / (2.0 * m_n(n)?), space)
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct ConstantsRow {
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "delta_N")]
    pub delta: f64,
    #[serde(rename = "s_N")]
    pub s_n: f64,
    #[serde(rename = "s_half_N")]
    pub s_half: f64,
    #[serde(rename = "M_N")]
    pub m: f64,
}

/// The headline constants for degrees 1..=n_max, computed once.
#[derive(Clone, Debug, Serialize)]
pub struct ConstantsTable {
    pub rows: Vec<ConstantsRow>,
}

impl ConstantsTable {
    pub fn new(n_max: usize) -> Result<Self> {
        check_degree(n_max)?;
        let mut rows = Vec::with_capacity(n_max);
        for n in 1..=n_max {
            rows.push(ConstantsRow {
                n,
                delta: delta_n(n)?,
                s_n: s_of_n(n)?,
                s_half: s_alpha_n(0.5, n)?,
                m: m_n(n)?,
            });
        }
        Ok(ConstantsTable { rows })
    }
}
