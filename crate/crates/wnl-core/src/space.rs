//! Finite-dimensional complex lp spaces: vectors, norms, supporting functionals,
//! distance to a complex line, modulus of convexity and the radial weight.
//!
//! Conventions used throughout the crate:
//! * an exponent `p` is any real in `[1, inf]`; infinity is `f64::INFINITY`;
//! * functionals act bilinearly, `f(y) = sum f_i * y_i`, with no conjugation
//!   (conjugates are baked into the coefficient vector where needed);
//! * every vector owns a copy of its `LpSpace`, and cross-space operations
//!   fail with `DimensionMismatch`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::optimize::nelder_mead_min2;

/// A finite-dimensional complex lp space: dimension plus exponent.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LpSpace {
    pub dim: usize,
    pub p: f64,
}

impl LpSpace {
    /// `dim >= 1`, `p in [1, inf]`.
    pub fn new(dim: usize, p: f64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::OutOfDomain {
                what: "dim",
                value: 0.0,
            });
        }
        if !(p >= 1.0) {
            return Err(Error::OutOfDomain { what: "p", value: p });
        }
        Ok(LpSpace { dim, p })
    }

    /// Conjugate exponent q with 1/p + 1/q = 1.
    pub fn dual_exponent(&self) -> f64 {
        if self.p.is_infinite() {
            1.0
        } else if self.p == 1.0 {
            f64::INFINITY
        } else {
            self.p / (self.p - 1.0)
        }
    }

    /// Uniform convexity holds exactly for finite p > 1.
    pub fn is_uniformly_convex(&self) -> bool {
        self.p > 1.0 && self.p.is_finite()
    }
}

/// The lp norm of a raw coordinate slice. Scales by the largest modulus first
/// so that large exponents do not overflow.
pub fn lp_norm_slice(p: f64, coords: &[Complex64]) -> f64 {
    if p.is_infinite() {
        return coords.iter().map(|z| z.norm()).fold(0.0, f64::max);
    }
    if p == 2.0 {
        return coords.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    }
    if p == 1.0 {
        return coords.iter().map(|z| z.norm()).sum();
    }
    let m = coords.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if m == 0.0 {
        return 0.0;
    }
    let s: f64 = coords.iter().map(|z| (z.norm() / m).powf(p)).sum();
    m * s.powf(1.0 / p)
}

/// A vector in a concrete `LpSpace`.
#[derive(Clone, Debug, PartialEq)]
pub struct LpVector {
    pub space: LpSpace,
    pub coords: Vec<Complex64>,
}

impl LpVector {
    pub fn new(space: LpSpace, coords: Vec<Complex64>) -> Result<Self> {
        if coords.len() != space.dim {
            return Err(Error::DimensionMismatch {
                expected: space.dim,
                got: coords.len(),
            });
        }
        Ok(LpVector { space, coords })
    }

    pub fn zero(space: LpSpace) -> Self {
        LpVector {
            space,
            coords: vec![Complex64::new(0.0, 0.0); space.dim],
        }
    }

    /// The j-th canonical basis vector (0-based index).
    pub fn basis(space: LpSpace, j: usize) -> Result<Self> {
        if j >= space.dim {
            return Err(Error::OutOfRange {
                index: j,
                max: space.dim - 1,
            });
        }
        let mut v = Self::zero(space);
        v.coords[j] = Complex64::new(1.0, 0.0);
        Ok(v)
    }

    pub fn from_reals(space: LpSpace, reals: &[f64]) -> Result<Self> {
        let coords = reals.iter().map(|&r| Complex64::new(r, 0.0)).collect();
        Self::new(space, coords)
    }

    pub fn norm(&self) -> f64 {
        lp_norm_slice(self.space.p, &self.coords)
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        LpVector {
            space: self.space,
            coords: self.coords.iter().map(|z| z * c).collect(),
        }
    }

    pub fn sub(&self, other: &LpVector) -> Result<Self> {
        check_same_space(self.space, other.space)?;
        Ok(LpVector {
            space: self.space,
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    /// Largest-modulus coordinate, reported 1-based; ties take the lowest index.
    pub fn dominant_index(&self) -> usize {
        let mut best = 0usize;
        let mut best_val = -1.0f64;
        for (i, z) in self.coords.iter().enumerate() {
            let m = z.norm();
            if m > best_val {
                best_val = m;
                best = i;
            }
        }
        best + 1
    }
}

pub(crate) fn check_same_space(a: LpSpace, b: LpSpace) -> Result<()> {
    if a.dim != b.dim || a.p != b.p {
        return Err(Error::DimensionMismatch {
            expected: a.dim,
            got: b.dim,
        });
    }
    Ok(())
}

/// A linear functional on an `LpSpace`, stored by its coefficient vector.
/// The action is bilinear: `f(y) = sum f_i * y_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct Functional {
    pub space: LpSpace,
    pub coords: Vec<Complex64>,
}

impl Functional {
    pub fn new(space: LpSpace, coords: Vec<Complex64>) -> Result<Self> {
        if coords.len() != space.dim {
            return Err(Error::DimensionMismatch {
                expected: space.dim,
                got: coords.len(),
            });
        }
        Ok(Functional { space, coords })
    }

    pub fn apply(&self, y: &LpVector) -> Result<Complex64> {
        check_same_space(self.space, y.space)?;
        Ok(self.apply_slice(&y.coords))
    }

    pub(crate) fn apply_slice(&self, y: &[Complex64]) -> Complex64 {
        self.coords
            .iter()
            .zip(y)
            .map(|(f, y)| f * y)
            .sum()
    }

    /// Operator norm on the lp ball = lq norm of the coefficients.
    pub fn dual_norm(&self) -> f64 {
        lp_norm_slice(self.space.dual_exponent(), &self.coords)
    }
}

/// Norming functional at `x`: `||f||_q = 1` and `f(x) = ||x||_p`.
///
/// For `1 < p < inf` the smooth-duality formula applies. For p = 1 the choice
/// `f_i = conj(x_i)/|x_i|` on the support of x (zero elsewhere) is used; for
/// p = inf the mass sits on the lowest index attaining the max modulus.
pub fn duality_functional(x: &LpVector) -> Result<Functional> {
    if x.is_zero() {
        return Err(Error::ZeroVector);
    }
    let p = x.space.p;
    let n = x.space.dim;
    let mut coords = vec![Complex64::new(0.0, 0.0); n];
    if p.is_infinite() {
        let mut j = 0usize;
        let mut best = -1.0;
        for (i, z) in x.coords.iter().enumerate() {
            let m = z.norm();
            if m > best {
                best = m;
                j = i;
            }
        }
        coords[j] = x.coords[j].conj() / best;
    } else if p == 1.0 {
        for (i, z) in x.coords.iter().enumerate() {
            let m = z.norm();
            if m > 0.0 {
                coords[i] = z.conj() / m;
            }
        }
    } else {
        let nx = x.norm();
        let scale = nx.powf(1.0 - p);
        for (i, z) in x.coords.iter().enumerate() {
            let m = z.norm();
            if m > 0.0 {
                coords[i] = z.conj() * m.powf(p - 2.0) * scale;
            }
        }
    }
    Functional::new(x.space, coords)
}

/// Distance from `y` to the complex line spanned by `x`, with the minimizing
/// multiplier. Closed form in the Hilbert case; deterministic Nelder-Mead
/// descent over the two real coordinates of the multiplier otherwise.
pub fn dist_to_span_with_argmin(y: &LpVector, x: &LpVector) -> Result<(f64, Complex64)> {
    check_same_space(y.space, x.space)?;
    if x.is_zero() {
        return Err(Error::ZeroVector);
    }
    if y.space.p == 2.0 {
        let num: Complex64 = y
            .coords
            .iter()
            .zip(&x.coords)
            .map(|(yi, xi)| yi * xi.conj())
            .sum();
        let den: f64 = x.coords.iter().map(|z| z.norm_sqr()).sum();
        let lambda = num / den;
        let d = y.sub(&x.scale(lambda))?.norm();
        return Ok((d, lambda));
    }

    let residual = |lam: [f64; 2]| -> f64 {
        let l = Complex64::new(lam[0], lam[1]);
        let mut diff = Vec::with_capacity(y.coords.len());
        for (yi, xi) in y.coords.iter().zip(&x.coords) {
            diff.push(yi - l * xi);
        }
        lp_norm_slice(y.space.p, &diff)
    };

    // Euclidean projection as the anchor start, then a deterministic ring.
    let num: Complex64 = y
        .coords
        .iter()
        .zip(&x.coords)
        .map(|(yi, xi)| yi * xi.conj())
        .sum();
    let den: f64 = x.coords.iter().map(|z| z.norm_sqr()).sum();
    let anchor = num / den;
    let r = anchor.norm().max(y.norm() / x.norm().max(1e-300)).max(1e-3);
    let starts: [[f64; 2]; 8] = [
        [anchor.re, anchor.im],
        [0.0, 0.0],
        [r, 0.0],
        [-r, 0.0],
        [0.0, r],
        [0.0, -r],
        [r * 0.5, r * 0.5],
        [-r * 0.5, -r * 0.5],
    ];
    let mut best: Option<(f64, Complex64)> = None;
    let mut any_converged = false;
    for s in starts {
        let out = nelder_mead_min2(residual, s, 0.25 * r, 1e-12, 4000);
        any_converged |= out.converged;
        let cand = (out.value, Complex64::new(out.x[0], out.x[1]));
        best = Some(match best {
            None => cand,
            Some(b) if cand.0 < b.0 => cand,
            Some(b) => b,
        });
    }
    if !any_converged {
        return Err(Error::NoConvergence {
            what: "dist_to_span",
        });
    }
    let (d, lambda) = best.unwrap();
    Ok((d, lambda))
}

/// Distance from `y` to `span_C(x)`.
pub fn dist_to_span(y: &LpVector, x: &LpVector) -> Result<f64> {
    dist_to_span_with_argmin(y, x).map(|(d, _)| d)
}

/// Ambient gradient of `z -> ||z||_p` at a nonzero point, viewed as a real
/// function of the 2n real coordinates but expressed as a complex vector:
/// `g_i = ||z||^{1-p} |z_i|^{p-2} z_i`. Requires finite p > 1 for smoothness;
/// coordinates at zero contribute zero (valid for p > 1).
pub(crate) fn norm_gradient_slice(p: f64, z: &[Complex64]) -> Vec<Complex64> {
    let n = lp_norm_slice(p, z);
    if n == 0.0 {
        return vec![Complex64::new(0.0, 0.0); z.len()];
    }
    if p == 2.0 {
        return z.iter().map(|zi| zi / n).collect();
    }
    let factor = n.powf(1.0 - p);
    z.iter()
        .map(|zi| {
            let m = zi.norm();
            if m < 1e-300 {
                Complex64::new(0.0, 0.0)
            } else {
                zi * (factor * m.powf(p - 2.0))
            }
        })
        .collect()
}

/// Lower bound for the modulus of convexity of lp on `[0, 2]`:
/// the Hilbertian formula generalized for p >= 2, the Hanner-type quadratic
/// bound `(p-1) t^2 / 8` for 1 < p < 2.
pub fn modulus_of_convexity(space: LpSpace, t: f64) -> Result<f64> {
    if !space.is_uniformly_convex() {
        return Err(Error::NotUniformlyConvex { p: space.p });
    }
    if !(0.0..=2.0).contains(&t) {
        return Err(Error::OutOfDomain {
            what: "t",
            value: t,
        });
    }
    let p = space.p;
    if p >= 2.0 {
        // 1 - (1 - (t/2)^p)^{1/p} via expm1/ln_1p; the naive form underflows
        // to 0 once (t/2)^p drops below machine epsilon
        let x = (t / 2.0).powf(p);
        if x >= 1.0 {
            return Ok(1.0);
        }
        Ok(-f64::exp_m1(f64::ln_1p(-x) / p))
    } else {
        Ok((p - 1.0) * t * t / 8.0)
    }
}

/// Radial weights on `[0, 1]`. Only the standard weight `1 - s^2` is shipped;
/// the enum is the extension point for other named closed forms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Weight {
    Standard,
}

impl Weight {
    pub fn name(&self) -> &'static str {
        match self {
            Weight::Standard => "standard",
        }
    }

    pub fn eval(&self, s: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&s) {
            return Err(Error::OutOfDomain {
                what: "s",
                value: s,
            });
        }
        Ok(self.eval_raw(s))
    }

    /// The closed form without the domain check, for hot paths whose inputs
    /// stay in [0,1] by construction.
    pub(crate) fn eval_raw(&self, s: f64) -> f64 {
        match self {
            Weight::Standard => 1.0 - s * s,
        }
    }
}

/// min over unit scalars of `||lambda a - b||`: distance up to a global phase.
/// Coarse phase grid followed by golden-section refinement.
pub fn phase_aligned_dist(a: &LpVector, b: &LpVector) -> Result<f64> {
    check_same_space(a.space, b.space)?;
    let obj = |theta: f64| -> f64 {
        let l = Complex64::from_polar(1.0, theta);
        let mut diff = Vec::with_capacity(a.coords.len());
        for (ai, bi) in a.coords.iter().zip(&b.coords) {
            diff.push(l * ai - bi);
        }
        lp_norm_slice(a.space.p, &diff)
    };
    let m = 256usize;
    let mut best_theta = 0.0;
    let mut best = f64::INFINITY;
    for k in 0..m {
        let th = 2.0 * std::f64::consts::PI * (k as f64) / (m as f64);
        let v = obj(th);
        if v < best {
            best = v;
            best_theta = th;
        }
    }
    let h = 2.0 * std::f64::consts::PI / m as f64;
    let (_, neg) = crate::optimize::golden_section_max(
        |th| -obj(th),
        best_theta - h,
        best_theta + h,
        1e-13,
        200,
    );
    Ok((-neg).min(best))
}
